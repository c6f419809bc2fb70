#pragma once

#include <cstdint>

#include "gbgm/grid.hpp"
#include "gbgm/image.hpp"
#include "gbgm/rng.hpp"

namespace gbgm {

enum class Interp { kNearest, kBilinear };
enum class SelectionDirection { kMaskLowest, kMaskHighest };
enum class FillMode { kZero, kMean };

/// Configuration of the two-stage mask generator.
///
/// Defaults reproduce the flagship 224x224 setting: 32-pixel coarse blocks
/// (7x7 grid), 16-pixel fine blocks (14x14 grid), 10% selection at both
/// stages, nearest-neighbor upsampling.
struct GbgmConfig {
    int s1 = 32;                       // coarse block side, must be even
    double mask_ratio_stage1 = 0.10;   // in (0,1)
    double mask_ratio_stage2 = 0.10;   // in (0,1)
    double epsilon = 1e-6;             // in (0,0.5); shared by normalization and sampling
    Interp interpolation = Interp::kNearest;
    SelectionDirection selection_direction = SelectionDirection::kMaskLowest;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument on violated invariants (odd s1, ratios or
    // epsilon out of range).
    void validate() const;
};

// Number of blocks a ratio selects out of n: max(1, round-half-up(ratio*n)).
// The clamp keeps a selection stage from ever being a no-op.
int selection_count(double ratio, int n);

// Central-patch side used for the purity statistic of a block of the given
// side: max(2, floor(block_size/2) rounded down to even). Gives the 2x2
// patch for 4-pixel blocks and an 8x8 patch for 16-pixel blocks.
int default_central_side(int block_size);

// Purity of every block: mean absolute deviation of the centered
// central_side x central_side patch from the whole block's mean intensity.
// Requires central_side even, <= block_size, with the same parity so the
// offset (block_size - central_side)/2 is integral.
PurityMap block_purity(const IntensityGrid& intensity, const GridSpec& grid,
                       int central_side);

// Marks exactly selection_count(ratio, n) blocks with bit 1: the lowest
// scores under kMaskLowest, the highest under kMaskHighest. Ties broken by
// ascending row-major index.
BlockMask select_blocks(const PurityMap& purity, double ratio,
                        SelectionDirection direction);

// Flips every bit; grid unchanged.
BlockMask invert_mask(const BlockMask& mask);

// Stage 2: subdivides every coarse block rejected by m1 (bit 0) into 2x2
// fine blocks of side s1/2 and marks the top-k2 fine blocks by purity, where
// k2 = selection_count(mask_ratio_stage2, candidate count). Fine cells
// inside retained coarse blocks stay 0. The output grid always has exactly
// 4x the coarse cell count.
BlockMask refine_mask(const IntensityGrid& intensity, const BlockMask& m1,
                      const GbgmConfig& config);

// 3x3 all-ones convolution with zero padding: each cell becomes the number
// of set bits in its 3x3 neighborhood (0..9).
ImportanceMap importance_conv(const BlockMask& m2);

// Min-max normalization with stabilizer: (I - min) / (max - min + epsilon).
// Output lies in [0,1); constant input maps to all zeros.
ImportanceMap normalize_importance(const ImportanceMap& importance, double epsilon);

// Per cell, draws R ~ U(epsilon, 1-epsilon) in row-major order and emits
// bit 1 iff value < R. Seed-deterministic given the stream.
BlockMask stochastic_threshold(const ImportanceMap& normalized, double epsilon,
                               RngStream& rng);

// Expands a low-resolution mask to height x width (block_size 1). Nearest
// replicates cells; bilinear interpolates cell-centered values and
// re-binarizes at 0.5 with ties going to 1. Requires the grid dimensions to
// divide the target dimensions.
BlockMask upsample_mask(const BlockMask& lowres, int height, int width, Interp mode);

/// Intermediates of one full pipeline run, kept for visualization.
struct GbgmStages {
    GridSpec coarse_grid;
    GridSpec fine_grid;
    PurityMap coarse_purity;
    BlockMask m1;        // stage-1 retain set (bit 1 = kept at coarse level)
    BlockMask m2;        // stage-2 fine selection
    ImportanceMap importance;
    ImportanceMap normalized;
    BlockMask lowres;    // pre-upsampling binary mask
};

// The full three-stage pipeline. Stage 1 scores coarse blocks and forms the
// retain set M1: under kMaskLowest the mask_ratio_stage1 lowest-purity
// blocks are rejected, under kMaskHighest exactly that fraction of
// top-purity blocks is retained. Stage 2 refines rejected blocks, stage 3
// turns the fine selection into a stochastic low-res mask and upsamples to
// the image size. Pure in (image, config, rng state).
BlockMask gbgm_mask(const Image& image, const GbgmConfig& config, RngStream& rng);
BlockMask gbgm_mask_stages(const Image& image, const GbgmConfig& config,
                           RngStream& rng, GbgmStages* stages);

// Single-stage variant for small inputs: the selection_count(ratio, n)
// lowest-purity patches get bit 0, everything else 1, upsampled nearest.
// No stochastic stage; rng is accepted for interface uniformity but unused.
BlockMask single_stage_mask(const Image& image, int block_size, double ratio,
                            RngStream& rng);

// Multiplies the image by a full-resolution mask. kZero zeroes masked
// pixels; kMean replaces them with the per-channel mean of the input.
Image apply_mask(const Image& image, const BlockMask& mask, FillMode fill);

}  // namespace gbgm

#pragma once

#include "gbgm/image.hpp"
#include "gbgm/rng.hpp"

namespace gbgm {

/// Reference masking augmentations. Hyperparameters default to the
/// originating methods' published settings; all draws come from the caller's
/// stream so results are pure in (image, params, seed).
struct RandomErasingParams {
    double probability = 0.5;
    double area_lo = 0.02, area_hi = 0.33;     // erased area as fraction of image
    double aspect_lo = 0.3, aspect_hi = 3.33;  // h/w of the erased rectangle
    int max_tries = 100;
};

struct GridMaskParams {
    int d_min = 96, d_max = 224;  // grid period range, inclusive
    double keep_ratio = 0.6;      // visible fraction of each period side
};

struct HideAndSeekParams {
    int patch_size = 56;          // must divide both image dimensions
    double hide_probability = 0.5;
};

// With params.probability, zero-fills one rectangle drawn by rejection
// sampling (area and aspect uniform in their ranges, up to max_tries
// placements); otherwise returns the image unchanged.
Image random_erasing(const Image& image, RngStream& rng, const RandomErasingParams& params);

// Periodic occlusion: squares of side round(d*(1-keep_ratio)) repeating with
// period d, phase uniform in [0,d)^2. d is drawn uniformly from
// [d_min, min(d_max, min(H,W))].
Image gridmask(const Image& image, RngStream& rng, const GridMaskParams& params);

// Deterministic core of gridmask with explicit period and phase.
Image gridmask_with_offset(const Image& image, int d, double keep_ratio,
                           int offset_x, int offset_y);

// Zeroes each patch independently with hide_probability; patches are
// scanned row-major, one draw per patch.
Image hide_and_seek(const Image& image, RngStream& rng, const HideAndSeekParams& params);

// Zeroes exactly max(1, round(ratio*N)) patches chosen uniformly without
// replacement (partial Fisher-Yates over row-major patch indices). Same
// count rule as the purity-guided masks, for comparability.
Image random_patch_mask(const Image& image, int patch_size, double ratio, RngStream& rng);

}  // namespace gbgm

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gbgm/baselines.hpp"
#include "gbgm/pipeline.hpp"

namespace gbgm {

/// One augmentation applied to one image. Purity-guided methods also expose
/// the full-resolution mask they applied; baselines only produce pixels.
struct AugmentOutput {
    Image image;
    std::optional<BlockMask> mask;
};

using Method = std::function<AugmentOutput(const Image&, RngStream&)>;

/// Shared knobs for the method registry. config.s1 doubles as the patch
/// size for the single-stage, hide-and-seek and random-patch methods so one
/// flag drives all patch-grid methods.
struct MethodParams {
    GbgmConfig config;
    FillMode fill = FillMode::kZero;
    RandomErasingParams erasing;
    GridMaskParams grid;
    double hide_probability = 0.5;  // hide-and-seek, patch side taken from config.s1
};

// Registered method names: gbgm, single, erasing, gridmask, has, random,
// plus gbgm-ref (the naive serial reference, kept for benchmark comparison).
const std::vector<std::string>& method_names();
bool is_method(const std::string& name);

// Throws std::invalid_argument for unknown names.
Method make_method(const std::string& name, const MethodParams& params);

// Coarse block side proportional to the image extent: extent/7 when that is
// divisible and a multiple of 4 (224 -> 32), otherwise extent/8
// (64 -> 8, 512 -> 64). Throws when neither rule yields a valid even size.
int proportional_block_size(int extent);

// Resolution-scaled defaults used by the benchmark harness: proportional s1
// and a gridmask period range of [extent/4, extent/2].
MethodParams scaled_method_params(int height, int width);

}  // namespace gbgm

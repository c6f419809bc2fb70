#include "gbgm/methods.hpp"

#include <algorithm>
#include <stdexcept>

#include "gbgm/reference.hpp"

namespace gbgm {

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {
        "gbgm", "gbgm-ref", "single", "erasing", "gridmask", "has", "random"};
    return names;
}

bool is_method(const std::string& name) {
    const auto& names = method_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

Method make_method(const std::string& name, const MethodParams& params) {
    if (name == "gbgm") {
        return [params](const Image& image, RngStream& rng) {
            BlockMask mask = gbgm_mask(image, params.config, rng);
            return AugmentOutput{apply_mask(image, mask, params.fill), std::move(mask)};
        };
    }
    if (name == "gbgm-ref") {
        return [params](const Image& image, RngStream& rng) {
            BlockMask mask = ref::gbgm_mask(image, params.config, rng);
            return AugmentOutput{apply_mask(image, mask, params.fill), std::move(mask)};
        };
    }
    if (name == "single") {
        return [params](const Image& image, RngStream& rng) {
            BlockMask mask = single_stage_mask(image, params.config.s1,
                                               params.config.mask_ratio_stage1, rng);
            return AugmentOutput{apply_mask(image, mask, params.fill), std::move(mask)};
        };
    }
    if (name == "erasing") {
        return [params](const Image& image, RngStream& rng) {
            return AugmentOutput{random_erasing(image, rng, params.erasing), std::nullopt};
        };
    }
    if (name == "gridmask") {
        return [params](const Image& image, RngStream& rng) {
            return AugmentOutput{gridmask(image, rng, params.grid), std::nullopt};
        };
    }
    if (name == "has") {
        return [params](const Image& image, RngStream& rng) {
            const HideAndSeekParams hs{params.config.s1, params.hide_probability};
            return AugmentOutput{hide_and_seek(image, rng, hs), std::nullopt};
        };
    }
    if (name == "random") {
        return [params](const Image& image, RngStream& rng) {
            return AugmentOutput{random_patch_mask(image, params.config.s1,
                                                   params.config.mask_ratio_stage1, rng),
                                 std::nullopt};
        };
    }
    throw std::invalid_argument("unknown method: " + name);
}

int proportional_block_size(int extent) {
    if (extent % 7 == 0 && (extent / 7) % 4 == 0) return extent / 7;
    if (extent % 8 == 0 && (extent / 8) % 4 == 0) return extent / 8;
    throw std::invalid_argument("no proportional block size divides extent " +
                                std::to_string(extent) +
                                " (need extent/7 or extent/8 to be a multiple of 4)");
}

MethodParams scaled_method_params(int height, int width) {
    const int extent = std::min(height, width);
    MethodParams params;
    params.config.s1 = proportional_block_size(extent);
    params.grid.d_min = std::max(2, extent / 4);
    params.grid.d_max = std::max(params.grid.d_min, extent / 2);
    return params;
}

}  // namespace gbgm

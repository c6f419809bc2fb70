#include "gbgm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gbgm/pipeline.hpp"

namespace gbgm {

namespace {

void zero_rect(Image& image, int top, int left, int h, int w) {
    for (int y = top; y < top + h; ++y) {
        for (int x = left; x < left + w; ++x) {
            for (int c = 0; c < image.channels(); ++c) {
                image.at(y, x, c) = 0.0;
            }
        }
    }
}

int round_positive(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

Image random_erasing(const Image& image, RngStream& rng,
                     const RandomErasingParams& params) {
    // Draw order: gate, then per try (area, aspect, top, left).
    const double gate = rng.uniform01();
    if (gate >= params.probability) {
        return image;
    }
    const int h = image.height();
    const int w = image.width();
    Image out = image;
    for (int attempt = 0; attempt < params.max_tries; ++attempt) {
        const double area_frac = rng.uniform(params.area_lo, params.area_hi);
        const double aspect = rng.uniform(params.aspect_lo, params.aspect_hi);
        const double target = area_frac * h * w;
        const int rh = round_positive(std::sqrt(target * aspect));
        const int rw = round_positive(std::sqrt(target / aspect));
        if (rh < 1 || rw < 1 || rh > h || rw > w) {
            continue;
        }
        const int top = static_cast<int>(rng.uniform_int(h - rh + 1));
        const int left = static_cast<int>(rng.uniform_int(w - rw + 1));
        zero_rect(out, top, left, rh, rw);
        return out;
    }
    return image;
}

Image gridmask_with_offset(const Image& image, int d, double keep_ratio,
                           int offset_x, int offset_y) {
    if (d <= 0) {
        throw std::invalid_argument("gridmask period must be positive");
    }
    const int hole = round_positive(d * (1.0 - keep_ratio));
    if (hole <= 0) {
        return image;
    }
    Image out = image;
    for (int y = 0; y < image.height(); ++y) {
        const int py = ((y - offset_y) % d + d) % d;
        if (py >= hole) continue;
        for (int x = 0; x < image.width(); ++x) {
            const int px = ((x - offset_x) % d + d) % d;
            if (px < hole) {
                for (int c = 0; c < image.channels(); ++c) {
                    out.at(y, x, c) = 0.0;
                }
            }
        }
    }
    return out;
}

Image gridmask(const Image& image, RngStream& rng, const GridMaskParams& params) {
    if (params.d_min <= 0 || params.d_max < params.d_min) {
        throw std::invalid_argument("gridmask period range is empty");
    }
    if (!(params.keep_ratio >= 0.0 && params.keep_ratio <= 1.0)) {
        throw std::invalid_argument("gridmask keep ratio must be in [0,1]");
    }
    // Draw order: d, offset_x, offset_y.
    const int extent = std::min(image.height(), image.width());
    const int hi = std::min(params.d_max, extent);
    const int lo = std::min(params.d_min, hi);
    const int d = lo + static_cast<int>(rng.uniform_int(hi - lo + 1));
    const int ox = static_cast<int>(rng.uniform_int(d));
    const int oy = static_cast<int>(rng.uniform_int(d));
    return gridmask_with_offset(image, d, params.keep_ratio, ox, oy);
}

Image hide_and_seek(const Image& image, RngStream& rng,
                    const HideAndSeekParams& params) {
    const int s = params.patch_size;
    if (s <= 0 || image.height() % s != 0 || image.width() % s != 0) {
        throw std::invalid_argument(
            "patch size must divide image dimensions: patch " + std::to_string(s) +
            " vs " + std::to_string(image.height()) + "x" +
            std::to_string(image.width()));
    }
    const int rows = image.height() / s;
    const int cols = image.width() / s;
    Image out = image;
    // One draw per patch, row-major.
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (rng.uniform01() < params.hide_probability) {
                zero_rect(out, i * s, j * s, s, s);
            }
        }
    }
    return out;
}

Image random_patch_mask(const Image& image, int patch_size, double ratio,
                        RngStream& rng) {
    const int s = patch_size;
    if (s <= 0 || image.height() % s != 0 || image.width() % s != 0) {
        throw std::invalid_argument(
            "patch size must divide image dimensions: patch " + std::to_string(s) +
            " vs " + std::to_string(image.height()) + "x" +
            std::to_string(image.width()));
    }
    const int rows = image.height() / s;
    const int cols = image.width() / s;
    const int n = rows * cols;
    const int k = selection_count(ratio, n);

    // Partial Fisher-Yates: the first k slots end up as a uniform sample
    // without replacement.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(n - i));
        std::swap(idx[i], idx[j]);
    }

    Image out = image;
    for (int i = 0; i < k; ++i) {
        const int bi = idx[i] / cols;
        const int bj = idx[i] % cols;
        zero_rect(out, bi * s, bj * s, s, s);
    }
    return out;
}

}  // namespace gbgm

#include "gbgm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gbgm/parallel.hpp"

namespace gbgm {

void GbgmConfig::validate() const {
    if (s1 <= 0 || s1 % 2 != 0) {
        throw std::invalid_argument("s1 must be a positive even block size, got " +
                                    std::to_string(s1));
    }
    if (!(mask_ratio_stage1 > 0.0 && mask_ratio_stage1 < 1.0)) {
        throw std::invalid_argument("stage-1 mask ratio must be in (0,1)");
    }
    if (!(mask_ratio_stage2 > 0.0 && mask_ratio_stage2 < 1.0)) {
        throw std::invalid_argument("stage-2 mask ratio must be in (0,1)");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("epsilon must be in (0,0.5)");
    }
}

int selection_count(double ratio, int n) {
    const int k = static_cast<int>(std::floor(ratio * n + 0.5));  // round half up
    return std::max(1, k);
}

int default_central_side(int block_size) {
    int half = block_size / 2;
    half -= half % 2;
    return std::max(2, half);
}

GridSpec partition_grid(int height, int width, int block_size) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (block_size <= 0) {
        throw std::invalid_argument("block size must be positive");
    }
    if (height % block_size != 0 || width % block_size != 0) {
        throw std::invalid_argument(
            "block size must divide image dimensions: block " +
            std::to_string(block_size) + " vs " + std::to_string(height) + "x" +
            std::to_string(width));
    }
    return GridSpec{block_size, height / block_size, width / block_size};
}

namespace {

void check_patch_geometry(int block_size, int central_side) {
    if (central_side <= 0 || central_side % 2 != 0) {
        throw std::invalid_argument("central patch side must be a positive even number");
    }
    if (central_side > block_size) {
        throw std::invalid_argument("central patch side " + std::to_string(central_side) +
                                    " exceeds block size " + std::to_string(block_size));
    }
    if ((block_size - central_side) % 2 != 0) {
        throw std::invalid_argument("central patch cannot be centered: block size " +
                                    std::to_string(block_size) + " minus patch side " +
                                    std::to_string(central_side) + " must be even");
    }
}

// Mean absolute deviation of the centered patch from the whole block's mean.
// Accumulation order is row-major; the serial reference relies on matching
// it bit for bit.
double block_score(const IntensityGrid& g, int y0, int x0, int block_size,
                   int central_side) {
    double sum = 0.0;
    for (int y = y0; y < y0 + block_size; ++y) {
        for (int x = x0; x < x0 + block_size; ++x) {
            sum += g.at(y, x);
        }
    }
    const double mean = sum / (block_size * block_size);

    const int off = (block_size - central_side) / 2;
    double dev = 0.0;
    for (int y = y0 + off; y < y0 + off + central_side; ++y) {
        for (int x = x0 + off; x < x0 + off + central_side; ++x) {
            dev += std::abs(g.at(y, x) - mean);
        }
    }
    return dev / (central_side * central_side);
}

void check_grid_matches(const GridSpec& grid, const IntensityGrid& g) {
    if (grid.pixel_height() != g.height() || grid.pixel_width() != g.width()) {
        throw std::invalid_argument("grid does not cover the intensity field");
    }
}

}  // namespace

PurityMap block_purity(const IntensityGrid& intensity, const GridSpec& grid,
                       int central_side) {
    check_grid_matches(grid, intensity);
    check_patch_geometry(grid.block_size, central_side);

    const int cells = grid.cell_count();
    const int s = grid.block_size;
    std::vector<double> scores(cells);
    const std::size_t work = static_cast<std::size_t>(intensity.height()) * intensity.width();
#pragma omp parallel for schedule(static) if (par::enabled() && work >= par::kGrain)
    for (int cell = 0; cell < cells; ++cell) {
        const int y0 = (cell / grid.cols) * s;
        const int x0 = (cell % grid.cols) * s;
        scores[cell] = block_score(intensity, y0, x0, s, central_side);
    }
    return PurityMap{grid, std::move(scores)};
}

BlockMask select_blocks(const PurityMap& purity, double ratio,
                        SelectionDirection direction) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("selection ratio must be in (0,1)");
    }
    const int n = purity.grid.cell_count();
    const int k = selection_count(ratio, n);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& s = purity.scores;
    if (direction == SelectionDirection::kMaskLowest) {
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return s[a] < s[b]; });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return s[a] > s[b]; });
    }

    BlockMask mask{purity.grid, std::vector<std::uint8_t>(n, 0)};
    for (int i = 0; i < k; ++i) mask.bits[order[i]] = 1;
    return mask;
}

BlockMask invert_mask(const BlockMask& mask) {
    BlockMask out = mask;
    for (auto& b : out.bits) b = b ? 0 : 1;
    return out;
}

BlockMask refine_mask(const IntensityGrid& intensity, const BlockMask& m1,
                      const GbgmConfig& config) {
    config.validate();
    if (m1.grid.block_size != config.s1) {
        throw std::invalid_argument("stage-1 mask block size does not match config s1");
    }
    check_grid_matches(m1.grid, intensity);

    const int s2 = config.s1 / 2;
    const GridSpec fine = partition_grid(intensity.height(), intensity.width(), s2);

    BlockMask m2{fine, std::vector<std::uint8_t>(fine.cell_count(), 0)};

    // Fine blocks inside rejected coarse blocks, in row-major order.
    std::vector<int> candidates;
    for (int fi = 0; fi < fine.rows; ++fi) {
        for (int fj = 0; fj < fine.cols; ++fj) {
            if (!m1.bits[(fi / 2) * m1.grid.cols + (fj / 2)]) {
                candidates.push_back(fi * fine.cols + fj);
            }
        }
    }
    if (candidates.empty()) {
        return m2;
    }

    const int central = default_central_side(s2);
    check_patch_geometry(s2, central);

    const int ncand = static_cast<int>(candidates.size());
    std::vector<double> scores(ncand);
    const std::size_t work = static_cast<std::size_t>(ncand) * s2 * s2;
#pragma omp parallel for schedule(static) if (par::enabled() && work >= par::kGrain)
    for (int i = 0; i < ncand; ++i) {
        const int cell = candidates[i];
        const int y0 = (cell / fine.cols) * s2;
        const int x0 = (cell % fine.cols) * s2;
        scores[i] = block_score(intensity, y0, x0, s2, central);
    }

    // Top-k2 purest candidates; ties by ascending fine row-major index
    // (candidates are already in that order, stable sort keeps it).
    const int k2 = selection_count(config.mask_ratio_stage2, ncand);
    std::vector<int> order(ncand);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    for (int i = 0; i < k2; ++i) m2.bits[candidates[order[i]]] = 1;
    return m2;
}

ImportanceMap importance_conv(const BlockMask& m2) {
    const int rows = m2.grid.rows;
    const int cols = m2.grid.cols;
    std::vector<double> values(static_cast<std::size_t>(rows) * cols);
    const std::size_t work = values.size();
#pragma omp parallel for schedule(static) if (par::enabled() && work >= par::kGrain)
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            int count = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int y = i + dy;
                    const int x = j + dx;
                    if (y >= 0 && y < rows && x >= 0 && x < cols) {
                        count += m2.bits[static_cast<std::size_t>(y) * cols + x];
                    }
                }
            }
            values[static_cast<std::size_t>(i) * cols + j] = count;
        }
    }
    return ImportanceMap{m2.grid, std::move(values)};
}

ImportanceMap normalize_importance(const ImportanceMap& importance, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    const auto& v = importance.values;
    if (v.empty()) {
        return ImportanceMap{importance.grid, {}};
    }
    double lo = v[0], hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double denom = (hi - lo) + epsilon;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = (v[i] - lo) / denom;
    }
    return ImportanceMap{importance.grid, std::move(out)};
}

BlockMask stochastic_threshold(const ImportanceMap& normalized, double epsilon,
                               RngStream& rng) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("epsilon must be in (0,0.5)");
    }
    // Row-major draw order is part of the contract; do not parallelize.
    BlockMask mask{normalized.grid,
                   std::vector<std::uint8_t>(normalized.values.size(), 0)};
    for (std::size_t i = 0; i < normalized.values.size(); ++i) {
        const double r = rng.uniform(epsilon, 1.0 - epsilon);
        mask.bits[i] = normalized.values[i] < r ? 1 : 0;
    }
    return mask;
}

BlockMask upsample_mask(const BlockMask& lowres, int height, int width, Interp mode) {
    const int rows = lowres.grid.rows;
    const int cols = lowres.grid.cols;
    if (height <= 0 || width <= 0 || height % rows != 0 || width % cols != 0) {
        throw std::invalid_argument(
            "upsample target must be a multiple of the mask grid: " +
            std::to_string(rows) + "x" + std::to_string(cols) + " -> " +
            std::to_string(height) + "x" + std::to_string(width));
    }

    BlockMask out{GridSpec{1, height, width},
                  std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width)};
    const std::size_t work = out.bits.size();
    if (mode == Interp::kNearest) {
        const int sy = height / rows;
        const int sx = width / cols;
#pragma omp parallel for schedule(static) if (par::enabled() && work >= par::kGrain)
        for (int y = 0; y < height; ++y) {
            const std::uint8_t* src = &lowres.bits[static_cast<std::size_t>(y / sy) * cols];
            std::uint8_t* dst = &out.bits[static_cast<std::size_t>(y) * width];
            for (int x = 0; x < width; ++x) {
                dst[x] = src[x / sx];
            }
        }
        return out;
    }

#pragma omp parallel for schedule(static) if (par::enabled() && work >= par::kGrain)
    for (int y = 0; y < height; ++y) {
        const double v = ((y + 0.5) * rows) / height - 0.5;
        int v0 = static_cast<int>(std::floor(v));
        const double fv = v - v0;
        int v1 = v0 + 1;
        v0 = std::clamp(v0, 0, rows - 1);
        v1 = std::clamp(v1, 0, rows - 1);
        for (int x = 0; x < width; ++x) {
            const double u = ((x + 0.5) * cols) / width - 0.5;
            int u0 = static_cast<int>(std::floor(u));
            const double fu = u - u0;
            int u1 = u0 + 1;
            u0 = std::clamp(u0, 0, cols - 1);
            u1 = std::clamp(u1, 0, cols - 1);
            const double b00 = lowres.bits[static_cast<std::size_t>(v0) * cols + u0];
            const double b01 = lowres.bits[static_cast<std::size_t>(v0) * cols + u1];
            const double b10 = lowres.bits[static_cast<std::size_t>(v1) * cols + u0];
            const double b11 = lowres.bits[static_cast<std::size_t>(v1) * cols + u1];
            const double val = (1.0 - fv) * ((1.0 - fu) * b00 + fu * b01) +
                               fv * ((1.0 - fu) * b10 + fu * b11);
            out.bits[static_cast<std::size_t>(y) * width + x] = val >= 0.5 ? 1 : 0;
        }
    }
    return out;
}

BlockMask gbgm_mask_stages(const Image& image, const GbgmConfig& config,
                           RngStream& rng, GbgmStages* stages) {
    config.validate();
    const IntensityGrid intensity = to_intensity(image);
    const GridSpec coarse = partition_grid(image.height(), image.width(), config.s1);
    PurityMap purity = block_purity(intensity, coarse, default_central_side(config.s1));

    // Stage-1 retain set: under kMaskLowest the selected (lowest-purity)
    // blocks are the rejected ones, so M1 is the complement; under
    // kMaskHighest the selected top-purity blocks are retained directly.
    BlockMask selected =
        select_blocks(purity, config.mask_ratio_stage1, config.selection_direction);
    BlockMask m1 = (config.selection_direction == SelectionDirection::kMaskLowest)
                       ? invert_mask(selected)
                       : std::move(selected);

    BlockMask m2 = refine_mask(intensity, m1, config);
    ImportanceMap importance = importance_conv(m2);
    ImportanceMap normalized = normalize_importance(importance, config.epsilon);
    BlockMask lowres = stochastic_threshold(normalized, config.epsilon, rng);
    BlockMask full =
        upsample_mask(lowres, image.height(), image.width(), config.interpolation);

    if (stages) {
        stages->coarse_grid = coarse;
        stages->fine_grid = m2.grid;
        stages->coarse_purity = std::move(purity);
        stages->m1 = std::move(m1);
        stages->m2 = std::move(m2);
        stages->importance = std::move(importance);
        stages->normalized = std::move(normalized);
        stages->lowres = std::move(lowres);
    }
    return full;
}

BlockMask gbgm_mask(const Image& image, const GbgmConfig& config, RngStream& rng) {
    return gbgm_mask_stages(image, config, rng, nullptr);
}

BlockMask single_stage_mask(const Image& image, int block_size, double ratio,
                            RngStream& rng) {
    (void)rng;
    const IntensityGrid intensity = to_intensity(image);
    const GridSpec grid = partition_grid(image.height(), image.width(), block_size);
    const PurityMap purity =
        block_purity(intensity, grid, default_central_side(block_size));
    const BlockMask removed =
        select_blocks(purity, ratio, SelectionDirection::kMaskLowest);
    return upsample_mask(invert_mask(removed), image.height(), image.width(),
                         Interp::kNearest);
}

Image apply_mask(const Image& image, const BlockMask& mask, FillMode fill) {
    if (mask.grid.block_size != 1 || mask.grid.rows != image.height() ||
        mask.grid.cols != image.width()) {
        throw std::invalid_argument("mask dimensions must equal image dimensions");
    }
    const int channels = image.channels();
    const std::size_t npx = static_cast<std::size_t>(image.height()) * image.width();

    double fill_value[3] = {0.0, 0.0, 0.0};
    if (fill == FillMode::kMean) {
        // Serial accumulation keeps the means identical across thread counts.
        for (std::size_t i = 0; i < npx; ++i) {
            for (int c = 0; c < channels; ++c) {
                fill_value[c] += image.pixels()[i * channels + c];
            }
        }
        for (int c = 0; c < channels; ++c) {
            fill_value[c] /= static_cast<double>(npx);
        }
    }

    std::vector<double> out(npx * channels);
    const double* src = image.pixels().data();
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(npx);
#pragma omp parallel for schedule(static) if (par::enabled() && npx >= par::kGrain)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const bool keep = mask.bits[i] != 0;
        for (int c = 0; c < channels; ++c) {
            out[i * channels + c] = keep ? src[i * channels + c] : fill_value[c];
        }
    }
    return Image(image.width(), image.height(), channels, std::move(out));
}

}  // namespace gbgm

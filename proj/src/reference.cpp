#include "gbgm/reference.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gbgm::ref {

namespace {

int k_from_ratio(double ratio, int n) {
    const int k = static_cast<int>(std::floor(ratio * n + 0.5));
    return k < 1 ? 1 : k;
}

int central_side(int block) {
    int half = block / 2;
    if (half % 2 != 0) half -= 1;
    return half < 2 ? 2 : half;
}

std::vector<double> luma(const Image& image) {
    const int h = image.height();
    const int w = image.width();
    std::vector<double> g(static_cast<std::size_t>(h) * w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v;
            if (image.channels() == 1) {
                v = image.at(y, x, 0);
            } else {
                v = (299.0 * image.at(y, x, 0) + 587.0 * image.at(y, x, 1) +
                     114.0 * image.at(y, x, 2)) / 1000.0;
                if (v < 0.0) v = 0.0;
                if (v > 1.0) v = 1.0;
            }
            g[static_cast<std::size_t>(y) * w + x] = v;
        }
    }
    return g;
}

double purity_of_block(const std::vector<double>& g, int width, int y0, int x0,
                       int block, int central) {
    double sum = 0.0;
    for (int y = y0; y < y0 + block; ++y) {
        for (int x = x0; x < x0 + block; ++x) {
            sum += g[static_cast<std::size_t>(y) * width + x];
        }
    }
    const double mean = sum / (block * block);
    const int off = (block - central) / 2;
    double dev = 0.0;
    for (int y = y0 + off; y < y0 + off + central; ++y) {
        for (int x = x0 + off; x < x0 + off + central; ++x) {
            dev += std::abs(g[static_cast<std::size_t>(y) * width + x] - mean);
        }
    }
    return dev / (central * central);
}

// Marks k entries of `picked`, scanning for the extremal unpicked score each
// round; strict comparison keeps ties on the lowest index.
void pick_extremal(const std::vector<double>& scores, int k, bool lowest,
                   std::vector<char>& picked) {
    const int n = static_cast<int>(scores.size());
    for (int round = 0; round < k; ++round) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (picked[i]) continue;
            if (best < 0 || (lowest ? scores[i] < scores[best]
                                    : scores[i] > scores[best])) {
                best = i;
            }
        }
        picked[best] = 1;
    }
}

void check_divides(const Image& image, int block) {
    if (block <= 0 || image.height() % block != 0 || image.width() % block != 0) {
        throw std::invalid_argument(
            "block size must divide image dimensions: block " + std::to_string(block) +
            " vs " + std::to_string(image.height()) + "x" +
            std::to_string(image.width()));
    }
}

BlockMask upsample(const std::vector<char>& low, int rows, int cols, int h, int w,
                   Interp mode) {
    BlockMask out{GridSpec{1, h, w},
                  std::vector<std::uint8_t>(static_cast<std::size_t>(h) * w)};
    if (mode == Interp::kNearest) {
        const int sy = h / rows;
        const int sx = w / cols;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                out.bits[static_cast<std::size_t>(y) * w + x] =
                    low[static_cast<std::size_t>(y / sy) * cols + x / sx] ? 1 : 0;
            }
        }
        return out;
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = ((y + 0.5) * rows) / h - 0.5;
            const double u = ((x + 0.5) * cols) / w - 0.5;
            int v0 = static_cast<int>(std::floor(v));
            int u0 = static_cast<int>(std::floor(u));
            const double fv = v - v0;
            const double fu = u - u0;
            int v1 = v0 + 1;
            int u1 = u0 + 1;
            if (v0 < 0) v0 = 0;
            if (v0 > rows - 1) v0 = rows - 1;
            if (v1 < 0) v1 = 0;
            if (v1 > rows - 1) v1 = rows - 1;
            if (u0 < 0) u0 = 0;
            if (u0 > cols - 1) u0 = cols - 1;
            if (u1 < 0) u1 = 0;
            if (u1 > cols - 1) u1 = cols - 1;
            const double b00 = low[static_cast<std::size_t>(v0) * cols + u0];
            const double b01 = low[static_cast<std::size_t>(v0) * cols + u1];
            const double b10 = low[static_cast<std::size_t>(v1) * cols + u0];
            const double b11 = low[static_cast<std::size_t>(v1) * cols + u1];
            const double val = (1.0 - fv) * ((1.0 - fu) * b00 + fu * b01) +
                               fv * ((1.0 - fu) * b10 + fu * b11);
            out.bits[static_cast<std::size_t>(y) * w + x] = val >= 0.5 ? 1 : 0;
        }
    }
    return out;
}

}  // namespace

BlockMask gbgm_mask(const Image& image, const GbgmConfig& config, RngStream& rng) {
    config.validate();
    check_divides(image, config.s1);
    const int h = image.height();
    const int w = image.width();
    const std::vector<double> g = luma(image);

    // Stage 1: coarse purity and retain set.
    const int s1 = config.s1;
    const int rows1 = h / s1;
    const int cols1 = w / s1;
    const int n1 = rows1 * cols1;
    const int c1 = central_side(s1);
    std::vector<double> purity1(n1);
    for (int i = 0; i < rows1; ++i) {
        for (int j = 0; j < cols1; ++j) {
            purity1[i * cols1 + j] = purity_of_block(g, w, i * s1, j * s1, s1, c1);
        }
    }
    const bool lowest = config.selection_direction == SelectionDirection::kMaskLowest;
    std::vector<char> picked(n1, 0);
    pick_extremal(purity1, k_from_ratio(config.mask_ratio_stage1, n1), lowest, picked);
    std::vector<char> retain(n1);
    for (int i = 0; i < n1; ++i) {
        retain[i] = lowest ? !picked[i] : picked[i];
    }

    // Stage 2: purity of fine blocks inside rejected coarse blocks.
    const int s2 = s1 / 2;
    const int rows2 = 2 * rows1;
    const int cols2 = 2 * cols1;
    const int n2 = rows2 * cols2;
    const int c2 = central_side(s2);
    if (c2 > s2 || (s2 - c2) % 2 != 0) {
        throw std::invalid_argument("fine block size " + std::to_string(s2) +
                                    " cannot hold an even centered patch");
    }
    std::vector<int> cand;
    std::vector<double> cand_score;
    for (int fi = 0; fi < rows2; ++fi) {
        for (int fj = 0; fj < cols2; ++fj) {
            if (!retain[(fi / 2) * cols1 + (fj / 2)]) {
                cand.push_back(fi * cols2 + fj);
                cand_score.push_back(purity_of_block(g, w, fi * s2, fj * s2, s2, c2));
            }
        }
    }
    std::vector<char> m2(n2, 0);
    if (!cand.empty()) {
        std::vector<char> taken(cand.size(), 0);
        pick_extremal(cand_score,
                      k_from_ratio(config.mask_ratio_stage2,
                                   static_cast<int>(cand.size())),
                      /*lowest=*/false, taken);
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (taken[i]) m2[cand[i]] = 1;
        }
    }

    // Stage 3: neighbor counts, normalization, stochastic thresholding.
    std::vector<double> imp(n2);
    for (int i = 0; i < rows2; ++i) {
        for (int j = 0; j < cols2; ++j) {
            int count = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int y = i + dy;
                    const int x = j + dx;
                    if (y >= 0 && y < rows2 && x >= 0 && x < cols2) {
                        count += m2[y * cols2 + x];
                    }
                }
            }
            imp[i * cols2 + j] = count;
        }
    }
    double lo = imp[0], hi = imp[0];
    for (double v : imp) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    const double denom = (hi - lo) + config.epsilon;
    std::vector<char> lowres(n2);
    for (int i = 0; i < n2; ++i) {
        const double normalized = (imp[i] - lo) / denom;
        const double r = rng.uniform(config.epsilon, 1.0 - config.epsilon);
        lowres[i] = normalized < r ? 1 : 0;
    }

    return upsample(lowres, rows2, cols2, h, w, config.interpolation);
}

BlockMask single_stage_mask(const Image& image, int block_size, double ratio,
                            RngStream& rng) {
    (void)rng;
    check_divides(image, block_size);
    const int h = image.height();
    const int w = image.width();
    const std::vector<double> g = luma(image);
    const int rows = h / block_size;
    const int cols = w / block_size;
    const int n = rows * cols;
    const int c = central_side(block_size);
    if (c > block_size || (block_size - c) % 2 != 0) {
        throw std::invalid_argument("block size " + std::to_string(block_size) +
                                    " cannot hold an even centered patch");
    }
    std::vector<double> purity(n);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            purity[i * cols + j] =
                purity_of_block(g, w, i * block_size, j * block_size, block_size, c);
        }
    }
    std::vector<char> removed(n, 0);
    pick_extremal(purity, k_from_ratio(ratio, n), /*lowest=*/true, removed);
    std::vector<char> keep(n);
    for (int i = 0; i < n; ++i) keep[i] = !removed[i];
    return upsample(keep, rows, cols, h, w, Interp::kNearest);
}

}  // namespace gbgm::ref

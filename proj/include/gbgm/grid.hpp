#pragma once

#include <cstdint>
#include <vector>

namespace gbgm {

/// Partition of an H x W image into non-overlapping square blocks.
/// rows * block_size == H and cols * block_size == W, enforced at creation.
struct GridSpec {
    int block_size = 0;
    int rows = 0;
    int cols = 0;

    int cell_count() const { return rows * cols; }
    int pixel_height() const { return rows * block_size; }
    int pixel_width() const { return cols * block_size; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Throws std::invalid_argument when block_size does not divide both
// dimensions exactly; no silent padding.
GridSpec partition_grid(int height, int width, int block_size);

/// One nonnegative purity score per block, row-major.
struct PurityMap {
    GridSpec grid;
    std::vector<double> scores;
};

/// Binary grid; bits are 0/1 only. A full-resolution mask is a BlockMask
/// with block_size 1.
struct BlockMask {
    GridSpec grid;
    std::vector<std::uint8_t> bits;

    int ones() const {
        int n = 0;
        for (auto b : bits) n += b;
        return n;
    }
};

/// Scalar field on a block grid: the raw 3x3 neighbor counts (integers in
/// [0,9]) or their min-max normalization (values in [0,1)).
struct ImportanceMap {
    GridSpec grid;
    std::vector<double> values;
};

}  // namespace gbgm

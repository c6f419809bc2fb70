#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gbgm/grid.hpp"
#include "gbgm/image.hpp"

namespace gbgm {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FileNotFoundError : IoError {
    using IoError::IoError;
};
struct UnsupportedFormatError : IoError {
    using IoError::IoError;
};
struct CorruptFileError : IoError {
    using IoError::IoError;
};

// Decodes PNG, PGM (P5) or PPM (P6) by extension, normalizing samples to
// [0,1] by the format maxval. Grayscale files load as 1 channel, color as 3;
// an alpha channel is dropped.
Image load_image(const std::filesystem::path& path);

// Encodes by extension: .png (8-bit), .pgm (P5, maxval 255), .ppm (P6).
// Samples are quantized with round(v * 255).
void save_image(const Image& image, const std::filesystem::path& path);

// Writes a binary mask as 0/255 (PGM or PNG by extension). The mask must be
// full resolution (block_size 1).
void save_mask(const BlockMask& mask, const std::filesystem::path& path);

// 16-bit PGM (P5, maxval 65535, big-endian samples) of values scaled by
// `scale` and clamped to [0,65535]. Used for intermediate-map dumps.
void save_gray16(const std::vector<double>& values, int width, int height,
                 double scale, const std::filesystem::path& path);

/// One file of a dataset directory; index is the stable RNG-stream key.
struct DatasetEntry {
    std::filesystem::path path;
    std::size_t index = 0;
};

// Enumerates files under `dir` whose path relative to `dir` matches `glob`
// ("*" within a segment, "**" across segments, "{a,b}" alternation), sorted
// by lexicographic byte order with indices assigned in that order.
std::vector<DatasetEntry> ingest_dir(const std::filesystem::path& dir,
                                     std::string_view glob);

}  // namespace gbgm

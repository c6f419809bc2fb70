#pragma once

#include <cstddef>
#include <vector>

namespace gbgm {

/// Dense H x W x C pixel buffer, row-major, channel-interleaved.
/// Values are normalized to [0,1] at load time; construction validates
/// the range so downstream block statistics can assume it.
class Image {
public:
    Image(int width, int height, int channels, std::vector<double> pixels);
    static Image filled(int width, int height, int channels, double value);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }

    double at(int y, int x, int c) const {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    double& at(int y, int x, int c) {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    const std::vector<double>& pixels() const { return pixels_; }
    std::vector<double>& pixels() { return pixels_; }

private:
    int width_;
    int height_;
    int channels_;
    std::vector<double> pixels_;
};

/// Single-channel scalar field in [0,1]; all purity statistics run on it.
class IntensityGrid {
public:
    IntensityGrid(int width, int height, std::vector<double> values);

    int width() const { return width_; }
    int height() const { return height_; }

    double at(int y, int x) const {
        return values_[static_cast<std::size_t>(y) * width_ + x];
    }

    const std::vector<double>& values() const { return values_; }

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

// Rec. 601 luma for 3-channel input (0.299 R + 0.587 G + 0.114 B, clamped),
// plain copy for single-channel.
IntensityGrid to_intensity(const Image& image);

// Nearest-neighbor resize. Only used by the CLI pre-resize path; masking
// itself never resamples its input.
Image resize_nearest(const Image& image, int new_width, int new_height);

}  // namespace gbgm

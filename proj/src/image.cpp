#include "gbgm/image.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gbgm/parallel.hpp"

namespace gbgm {

namespace {

void check_buffer(const char* what, const std::vector<double>& values,
                  std::size_t expected) {
    if (values.size() != expected) {
        throw std::invalid_argument(std::string(what) + ": buffer size " +
                                    std::to_string(values.size()) + " != expected " +
                                    std::to_string(expected));
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw std::invalid_argument(std::string(what) +
                                        ": values must be finite and in [0,1]");
        }
    }
}

}  // namespace

Image::Image(int width, int height, int channels, std::vector<double> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
    if (width_ <= 0 || height_ <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (channels_ != 1 && channels_ != 3) {
        throw std::invalid_argument("image must have 1 or 3 channels");
    }
    check_buffer("image", pixels_,
                 static_cast<std::size_t>(width_) * height_ * channels_);
}

Image Image::filled(int width, int height, int channels, double value) {
    return Image(width, height, channels,
                 std::vector<double>(
                     static_cast<std::size_t>(width) * height * channels, value));
}

IntensityGrid::IntensityGrid(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width_ <= 0 || height_ <= 0) {
        throw std::invalid_argument("intensity dimensions must be positive");
    }
    check_buffer("intensity", values_, static_cast<std::size_t>(width_) * height_);
}

IntensityGrid to_intensity(const Image& image) {
    if (image.channels() == 1) {
        return IntensityGrid(image.width(), image.height(), image.pixels());
    }
    const std::size_t n = static_cast<std::size_t>(image.width()) * image.height();
    std::vector<double> values(n);
    const double* px = image.pixels().data();
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (par::enabled() && n >= par::kGrain)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const double* p = px + 3 * i;
        // Integer weights keep pure white at exactly 1.0.
        double y = (299.0 * p[0] + 587.0 * p[1] + 114.0 * p[2]) / 1000.0;
        if (y < 0.0) y = 0.0;
        if (y > 1.0) y = 1.0;
        values[i] = y;
    }
    return IntensityGrid(image.width(), image.height(), std::move(values));
}

Image resize_nearest(const Image& image, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0) {
        throw std::invalid_argument("resize dimensions must be positive");
    }
    const int c = image.channels();
    std::vector<double> out(static_cast<std::size_t>(new_width) * new_height * c);
    for (int y = 0; y < new_height; ++y) {
        const int sy = static_cast<int>((static_cast<std::int64_t>(y) * image.height()) / new_height);
        for (int x = 0; x < new_width; ++x) {
            const int sx = static_cast<int>((static_cast<std::int64_t>(x) * image.width()) / new_width);
            for (int ch = 0; ch < c; ++ch) {
                out[(static_cast<std::size_t>(y) * new_width + x) * c + ch] =
                    image.at(sy, sx, ch);
            }
        }
    }
    return Image(new_width, new_height, c, std::move(out));
}

}  // namespace gbgm

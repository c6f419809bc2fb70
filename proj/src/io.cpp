#include "gbgm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <regex>

#include <png.h>

namespace gbgm {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFoundError("cannot open file: " + path.string());
    }
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

// --- PNM (binary PGM/PPM) ----------------------------------------------

struct PnmHeader {
    int channels = 0;
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(const std::vector<unsigned char>& bytes,
                           const std::string& name) {
    if (bytes.size() < 2) {
        throw CorruptFileError(name + ": truncated PNM header");
    }
    if (bytes[0] != 'P') {
        throw CorruptFileError(name + ": not a PNM file");
    }
    PnmHeader h;
    if (bytes[1] == '5') {
        h.channels = 1;
    } else if (bytes[1] == '6') {
        h.channels = 3;
    } else if (bytes[1] == '2' || bytes[1] == '3' || bytes[1] == '1' || bytes[1] == '4') {
        throw UnsupportedFormatError(name + ": only binary P5/P6 PNM is supported");
    } else {
        throw CorruptFileError(name + ": unknown PNM magic");
    }

    std::size_t pos = 2;
    auto next_int = [&](int& out) {
        // Skip whitespace and '#' comments between header fields.
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw CorruptFileError(name + ": corrupt PNM header");
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1000000000L) throw CorruptFileError(name + ": corrupt PNM header");
            ++pos;
        }
        out = static_cast<int>(v);
    };
    next_int(h.width);
    next_int(h.height);
    next_int(h.maxval);
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw CorruptFileError(name + ": corrupt PNM header");
    }
    ++pos;  // single whitespace before the raster
    if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
        throw CorruptFileError(name + ": corrupt PNM header");
    }
    h.data_offset = pos;
    return h;
}

Image load_pnm(const std::filesystem::path& path) {
    const auto bytes = read_all(path);
    const PnmHeader h = parse_pnm_header(bytes, path.filename().string());
    const std::size_t samples =
        static_cast<std::size_t>(h.width) * h.height * h.channels;
    const int bytes_per_sample = h.maxval > 255 ? 2 : 1;
    if (bytes.size() - h.data_offset < samples * bytes_per_sample) {
        throw CorruptFileError(path.filename().string() + ": truncated PNM raster");
    }
    std::vector<double> values(samples);
    const unsigned char* p = bytes.data() + h.data_offset;
    const double inv = 1.0 / h.maxval;
    if (bytes_per_sample == 1) {
        for (std::size_t i = 0; i < samples; ++i) values[i] = p[i] * inv;
    } else {
        for (std::size_t i = 0; i < samples; ++i) {
            values[i] = ((p[2 * i] << 8) | p[2 * i + 1]) * inv;  // big-endian
        }
    }
    return Image(h.width, h.height, h.channels, std::move(values));
}

void write_file(const std::filesystem::path& path, const std::string& header,
                const unsigned char* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void save_pnm8(const std::vector<unsigned char>& data, int width, int height,
               int channels, const std::filesystem::path& path) {
    const std::string header = std::string(channels == 1 ? "P5" : "P6") + "\n" +
                               std::to_string(width) + " " + std::to_string(height) +
                               "\n255\n";
    write_file(path, header, data.data(), data.size());
}

// --- PNG (libpng simplified API) ----------------------------------------

Image load_png(const std::filesystem::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
        throw CorruptFileError(path.filename().string() + ": " + png.message);
    }
    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    // Request with alpha and drop it afterwards; compositing would bake in
    // an arbitrary background.
    png.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
    const int in_ch = color ? 4 : 2;
    const int out_ch = color ? 3 : 1;
    std::vector<unsigned char> buf(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
        throw CorruptFileError(path.filename().string() + ": " + png.message);
    }
    const std::size_t npx = static_cast<std::size_t>(png.width) * png.height;
    std::vector<double> values(npx * out_ch);
    for (std::size_t i = 0; i < npx; ++i) {
        for (int c = 0; c < out_ch; ++c) {
            values[i * out_ch + c] = buf[i * in_ch + c] / 255.0;
        }
    }
    return Image(static_cast<int>(png.width), static_cast<int>(png.height), out_ch,
                 std::move(values));
}

void save_png(const std::vector<unsigned char>& data, int width, int height,
              int channels, const std::filesystem::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(width);
    png.height = static_cast<png_uint_32>(height);
    png.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, data.data(),
                                 width * channels, nullptr)) {
        throw IoError("cannot write PNG: " + path.string() + ": " + png.message);
    }
}

std::vector<unsigned char> quantize8(const std::vector<double>& values) {
    std::vector<unsigned char> bytes(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        bytes[i] = static_cast<unsigned char>(std::lround(values[i] * 255.0));
    }
    return bytes;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw FileNotFoundError("no such file: " + path.string());
    }
    const std::string ext = lower_ext(path);
    if (ext == ".png") return load_png(path);
    if (ext == ".pgm" || ext == ".ppm") return load_pnm(path);
    throw UnsupportedFormatError("unsupported image format: " + path.string());
}

void save_image(const Image& image, const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    const auto bytes = quantize8(image.pixels());
    if (ext == ".png") {
        save_png(bytes, image.width(), image.height(), image.channels(), path);
        return;
    }
    if (ext == ".pgm") {
        if (image.channels() != 1) {
            throw UnsupportedFormatError("PGM holds a single channel; use .ppm or .png");
        }
        save_pnm8(bytes, image.width(), image.height(), 1, path);
        return;
    }
    if (ext == ".ppm") {
        if (image.channels() != 3) {
            throw UnsupportedFormatError("PPM holds three channels; use .pgm or .png");
        }
        save_pnm8(bytes, image.width(), image.height(), 3, path);
        return;
    }
    throw UnsupportedFormatError("unsupported image format: " + path.string());
}

void save_mask(const BlockMask& mask, const std::filesystem::path& path) {
    if (mask.grid.block_size != 1) {
        throw std::invalid_argument("save_mask expects a full-resolution mask");
    }
    std::vector<unsigned char> bytes(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        bytes[i] = mask.bits[i] ? 255 : 0;
    }
    const std::string ext = lower_ext(path);
    if (ext == ".png") {
        save_png(bytes, mask.grid.cols, mask.grid.rows, 1, path);
    } else if (ext == ".pgm") {
        save_pnm8(bytes, mask.grid.cols, mask.grid.rows, 1, path);
    } else {
        throw UnsupportedFormatError("masks are written as .pgm or .png: " + path.string());
    }
}

void save_gray16(const std::vector<double>& values, int width, int height,
                 double scale, const std::filesystem::path& path) {
    if (values.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("save_gray16: buffer does not match dimensions");
    }
    std::vector<unsigned char> bytes(values.size() * 2);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double scaled = values[i] * scale;
        const long q = std::lround(std::min(65535.0, std::max(0.0, scaled)));
        bytes[2 * i] = static_cast<unsigned char>((q >> 8) & 0xFF);
        bytes[2 * i + 1] = static_cast<unsigned char>(q & 0xFF);
    }
    const std::string header =
        "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
    write_file(path, header, bytes.data(), bytes.size());
}

namespace {

// Translates a glob ("*" within a segment, "**" across segments, "{a,b}"
// alternation, "?" single char) into an anchored regex.
std::string glob_to_regex(std::string_view glob) {
    std::string re;
    for (std::size_t i = 0; i < glob.size(); ++i) {
        const char c = glob[i];
        if (c == '*') {
            if (i + 1 < glob.size() && glob[i + 1] == '*') {
                i += 1;
                if (i + 1 < glob.size() && glob[i + 1] == '/') {
                    i += 1;
                    re += "([^/]+/)*";  // "**/" may match zero directories
                } else {
                    re += ".*";
                }
            } else {
                re += "[^/]*";
            }
        } else if (c == '?') {
            re += "[^/]";
        } else if (c == '{') {
            const auto close = glob.find('}', i);
            if (close == std::string_view::npos) {
                throw std::invalid_argument("glob has an unmatched '{'");
            }
            re += '(';
            for (std::size_t j = i + 1; j < close; ++j) {
                if (glob[j] == ',') {
                    re += '|';
                } else if (std::isalnum(static_cast<unsigned char>(glob[j]))) {
                    re += glob[j];
                } else {
                    re += '\\';
                    re += glob[j];
                }
            }
            re += ')';
            i = close;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '_' ||
                   c == '-') {
            re += c;
        } else {
            re += '\\';
            re += c;
        }
    }
    return re;
}

}  // namespace

std::vector<DatasetEntry> ingest_dir(const std::filesystem::path& dir,
                                     std::string_view glob) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw IoError("not a readable directory: " + dir.string());
    }
    const std::regex pattern(glob_to_regex(glob));

    std::vector<std::filesystem::path> files;
    try {
        for (auto it = std::filesystem::recursive_directory_iterator(dir);
             it != std::filesystem::recursive_directory_iterator(); ++it) {
            if (!it->is_regular_file()) continue;
            const std::string rel =
                it->path().lexically_relative(dir).generic_string();
            if (std::regex_match(rel, pattern)) {
                files.push_back(it->path());
            }
        }
    } catch (const std::filesystem::filesystem_error& e) {
        throw IoError(std::string("cannot enumerate directory: ") + e.what());
    }

    std::sort(files.begin(), files.end(),
              [](const std::filesystem::path& a, const std::filesystem::path& b) {
                  return a.generic_string() < b.generic_string();
              });
    std::vector<DatasetEntry> entries;
    entries.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        entries.push_back(DatasetEntry{files[i], i});
    }
    return entries;
}

}  // namespace gbgm

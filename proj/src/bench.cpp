#include "gbgm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>

#include "gbgm/io.hpp"
#include "gbgm/methods.hpp"
#include "gbgm/parallel.hpp"
#include "gbgm/rng.hpp"

namespace gbgm {

namespace {

constexpr int kWarmupIterations = 2;
constexpr int kPixelScalingBatch = 2;
constexpr double kSublinearThreshold = 0.9;

// Keeps the optimizer from discarding augmented batches in timed loops.
volatile double g_sink = 0.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    const auto ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return std::max(1e-9, static_cast<double>(ns.count()) * 1e-9);
}

struct OlsFit {
    double slope = 0.0;
    double r2 = 1.0;
};

OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    if (syy <= 0.0) {
        fit.r2 = 1.0;  // all responses equal: the flat fit is exact
    } else {
        fit.r2 = std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    }
    return fit;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2 == 1) return v[mid];
    return 0.5 * (v[mid - 1] + v[mid]);
}

Trend classify(double beta) {
    return beta < kSublinearThreshold ? Trend::kSublinear : Trend::kLinear;
}

// Groups elapsed times by a numeric key and fits ln(median) against ln(key).
ScalingFit fit_loglog(const std::vector<BenchSample>& samples,
                      double (*key)(const BenchSample&), const char* key_name) {
    if (samples.empty()) {
        throw std::invalid_argument("no samples to fit");
    }
    std::map<double, std::vector<double>> groups;
    for (const auto& s : samples) {
        groups[key(s)].push_back(s.elapsed_s);
    }
    if (groups.size() < 2) {
        throw std::invalid_argument(std::string("need at least 2 distinct ") +
                                    key_name + " values to fit");
    }
    std::vector<double> xs, ys;
    xs.reserve(groups.size());
    ys.reserve(groups.size());
    for (auto& [k, times] : groups) {
        xs.push_back(std::log(k));
        ys.push_back(std::log(median(std::move(times))));
    }
    const OlsFit f = ols(xs, ys);
    return ScalingFit{samples.front().method, f.slope, f.r2, classify(f.slope)};
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw CorruptFileError("malformed CSV number: " + std::string(text));
    }
    return v;
}

int parse_int(std::string_view text) {
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw CorruptFileError("malformed CSV integer: " + std::string(text));
    }
    return v;
}

std::vector<std::string_view> split_csv_row(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

std::string to_string(Trend trend) {
    return trend == Trend::kLinear ? "Linear" : "Sublinear";
}

std::vector<Image> make_synthetic_batch(std::uint64_t seed, int count, int height,
                                        int width, int channels) {
    RngStream rng(RngStream::mix(seed ^ 0xDA7A5EEDULL));
    std::vector<Image> images;
    images.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::vector<double> px(static_cast<std::size_t>(height) * width * channels);
        for (auto& v : px) v = rng.uniform01();
        images.emplace_back(width, height, channels, std::move(px));
    }
    return images;
}

std::vector<BenchSample> run_bench(const std::string& method,
                                   const std::vector<int>& batch_sizes,
                                   int resolution, int repeats, std::uint64_t seed,
                                   bool parallel) {
    if (!is_method(method)) {
        throw std::invalid_argument("unknown method: " + method);
    }
    if (batch_sizes.empty() || repeats <= 0) {
        throw std::invalid_argument("bench needs at least one batch size and repeat");
    }
    const int max_batch = *std::max_element(batch_sizes.begin(), batch_sizes.end());
    if (*std::min_element(batch_sizes.begin(), batch_sizes.end()) <= 0) {
        throw std::invalid_argument("batch sizes must be positive");
    }

    const Method fn = make_method(method, scaled_method_params(resolution, resolution));
    const auto pool = make_synthetic_batch(seed, max_batch, resolution, resolution);
    const std::string label = parallel ? method + "+omp" : method;

    // Timed region is single-threaded unless parallel mode is requested.
    std::optional<par::SerialGuard> serial;
    if (!parallel) serial.emplace();

    std::vector<BenchSample> samples;
    samples.reserve(batch_sizes.size() * repeats);
    std::uint64_t stream_counter = 0;
    for (int batch : batch_sizes) {
        for (int rep = -kWarmupIterations; rep < repeats; ++rep) {
            const auto start = Clock::now();
            for (int i = 0; i < batch; ++i) {
                RngStream rng = derive_stream(seed, stream_counter++);
                const AugmentOutput out = fn(pool[i], rng);
                g_sink = g_sink + out.image.pixels()[0];
            }
            const double elapsed = seconds_since(start);
            if (rep >= 0) {
                samples.push_back(
                    BenchSample{label, batch, resolution, resolution, rep, elapsed});
            }
        }
    }
    return samples;
}

ScalingFit fit_scaling(const std::vector<BenchSample>& samples) {
    return fit_loglog(
        samples, [](const BenchSample& s) { return static_cast<double>(s.batch_size); },
        "batch size");
}

ScalingFit fit_pixel_scaling(const std::vector<BenchSample>& samples) {
    return fit_loglog(
        samples,
        [](const BenchSample& s) {
            return static_cast<double>(s.height) * static_cast<double>(s.width);
        },
        "pixel count");
}

std::vector<BenchSample> run_pixel_bench(const std::string& method,
                                         const std::vector<int>& resolutions,
                                         int repeats, std::uint64_t seed,
                                         bool parallel) {
    if (!is_method(method)) {
        throw std::invalid_argument("unknown method: " + method);
    }
    if (repeats <= 0) {
        throw std::invalid_argument("bench needs at least one repeat");
    }
    const std::string label = parallel ? method + "+omp" : method;

    std::optional<par::SerialGuard> serial;
    if (!parallel) serial.emplace();

    std::vector<BenchSample> samples;
    std::uint64_t stream_counter = 0;
    for (int res : resolutions) {
        const Method fn = make_method(method, scaled_method_params(res, res));
        const auto pool = make_synthetic_batch(seed, kPixelScalingBatch, res, res);
        for (int rep = -kWarmupIterations; rep < repeats; ++rep) {
            const auto start = Clock::now();
            for (const Image& image : pool) {
                RngStream rng = derive_stream(seed, stream_counter++);
                const AugmentOutput out = fn(image, rng);
                g_sink = g_sink + out.image.pixels()[0];
            }
            const double elapsed = seconds_since(start);
            if (rep >= 0) {
                samples.push_back(
                    BenchSample{label, kPixelScalingBatch, res, res, rep, elapsed});
            }
        }
    }
    return samples;
}

ScalingFit pixel_scaling(const std::string& method, const std::vector<int>& resolutions,
                         int repeats, std::uint64_t seed, bool parallel) {
    std::vector<int> distinct = resolutions;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
        throw std::invalid_argument("pixel scaling needs at least 3 distinct resolutions");
    }
    return fit_pixel_scaling(run_pixel_bench(method, resolutions, repeats, seed, parallel));
}

void emit_csv(const std::vector<BenchSample>& samples,
              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write CSV: " + path.string());
    }
    out << "method,batch,h,w,repeat,elapsed_s\n";
    for (const auto& s : samples) {
        out << s.method << ',' << s.batch_size << ',' << s.height << ',' << s.width
            << ',' << s.repeat_index << ',' << format_double(s.elapsed_s) << '\n';
    }
    if (!out.flush()) {
        throw IoError("write failed: " + path.string());
    }
}

void emit_csv(const std::vector<ScalingFit>& fits, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write CSV: " + path.string());
    }
    out << "method,beta,r2,trend\n";
    for (const auto& f : fits) {
        out << f.method << ',' << format_double(f.beta) << ',' << format_double(f.r2)
            << ',' << to_string(f.trend) << '\n';
    }
    if (!out.flush()) {
        throw IoError("write failed: " + path.string());
    }
}

std::vector<BenchSample> parse_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FileNotFoundError("cannot open CSV: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "method,batch,h,w,repeat,elapsed_s") {
        throw CorruptFileError("unexpected CSV header in " + path.string());
    }
    std::vector<BenchSample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 6) {
            throw CorruptFileError("malformed CSV row: " + line);
        }
        samples.push_back(BenchSample{std::string(fields[0]), parse_int(fields[1]),
                                      parse_int(fields[2]), parse_int(fields[3]),
                                      parse_int(fields[4]), parse_double(fields[5])});
    }
    return samples;
}

}  // namespace gbgm

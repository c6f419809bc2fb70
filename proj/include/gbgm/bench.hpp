#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gbgm/image.hpp"

namespace gbgm {

/// One timed application of a method to a whole batch.
struct BenchSample {
    std::string method;
    int batch_size = 0;
    int height = 0;
    int width = 0;
    int repeat_index = 0;
    double elapsed_s = 0.0;  // monotonic wall clock, > 0
};

enum class Trend { kLinear, kSublinear };
std::string to_string(Trend trend);

/// Log-log regression result. trend is kSublinear iff beta < 0.9; the
/// threshold separates the observed clusters (~0.6 vs ~0.95-1.0).
struct ScalingFit {
    std::string method;
    double beta = 0.0;
    double r2 = 0.0;
    Trend trend = Trend::kLinear;
};

// Deterministic synthetic RGB batch for timing runs; pixels are uniform
// draws from the seed, so two runs with one seed use identical inputs.
std::vector<Image> make_synthetic_batch(std::uint64_t seed, int count,
                                        int height, int width, int channels = 3);

// Times `method` over each batch size: 2 untimed warmup iterations per
// setting, then `repeats` timed applications to the whole batch. Image
// synthesis is excluded from the timed region. Timed kernels run
// single-threaded unless `parallel` is set, in which case the method label
// gets an "+omp" suffix so the CSV rows stay distinguishable.
std::vector<BenchSample> run_bench(const std::string& method,
                                   const std::vector<int>& batch_sizes,
                                   int resolution, int repeats,
                                   std::uint64_t seed, bool parallel = false);

// OLS of ln(median elapsed per batch size) against ln(batch size).
// Requires >= 2 distinct batch sizes.
ScalingFit fit_scaling(const std::vector<BenchSample>& samples);

// Same regression against ln(pixel count); used for the linear-in-pixels
// check where the block size scales proportionally with resolution.
ScalingFit fit_pixel_scaling(const std::vector<BenchSample>& samples);

// Times `method` across square resolutions (block sizes scaled
// proportionally, batch fixed at 2) and fits ln time vs ln(H*W).
// Requires >= 3 resolutions.
ScalingFit pixel_scaling(const std::string& method,
                         const std::vector<int>& resolutions, int repeats,
                         std::uint64_t seed, bool parallel = false);
std::vector<BenchSample> run_pixel_bench(const std::string& method,
                                         const std::vector<int>& resolutions,
                                         int repeats, std::uint64_t seed,
                                         bool parallel = false);

// CSV schemas (header + one row per record, '.' decimal point, no locale;
// doubles printed in shortest round-trip form):
//   samples: method,batch,h,w,repeat,elapsed_s
//   fits:    method,beta,r2,trend
void emit_csv(const std::vector<BenchSample>& samples, const std::filesystem::path& path);
void emit_csv(const std::vector<ScalingFit>& fits, const std::filesystem::path& path);
std::vector<BenchSample> parse_samples_csv(const std::filesystem::path& path);

}  // namespace gbgm

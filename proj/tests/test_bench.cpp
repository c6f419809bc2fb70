#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "gbgm/bench.hpp"
#include "gbgm/io.hpp"
#include "gbgm/methods.hpp"

using namespace gbgm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() /
                         ("gbgm_bench_" + std::to_string(::getpid()) + "_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Synthetic samples following elapsed = scale * batch^beta exactly.
std::vector<BenchSample> power_law_samples(double scale, double beta, int repeats) {
    std::vector<BenchSample> samples;
    for (int batch : {1, 2, 4, 8, 16, 32}) {
        for (int rep = 0; rep < repeats; ++rep) {
            samples.push_back(BenchSample{"synthetic", batch, 224, 224, rep,
                                          scale * std::pow(batch, beta)});
        }
    }
    return samples;
}

int count_lines(const fs::path& p) {
    std::ifstream in(p);
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    return lines;
}

}  // namespace

TEST_SUITE_BEGIN("bench");

TEST_CASE("fit_scaling recovers exact power laws") {
    // t = 2 b: slope one, perfect fit.
    const ScalingFit linear = fit_scaling(power_law_samples(2.0, 1.0, 3));
    CHECK(std::abs(linear.beta - 1.0) <= 1e-9);
    CHECK(std::abs(linear.r2 - 1.0) <= 1e-9);
    CHECK(linear.trend == Trend::kLinear);

    const ScalingFit sub = fit_scaling(power_law_samples(0.0037, 0.601, 5));
    CHECK(std::abs(sub.beta - 0.601) <= 1e-9);
    CHECK(std::abs(sub.r2 - 1.0) <= 1e-9);
    CHECK(sub.trend == Trend::kSublinear);

    const ScalingFit half = fit_scaling(power_law_samples(1.0, 0.5, 1));
    CHECK(std::abs(half.beta - 0.5) <= 1e-9);
}

TEST_CASE("fit_scaling is invariant to uniform time rescaling") {
    const auto base = power_law_samples(1.0, 0.83, 4);
    auto scaled = base;
    for (auto& s : scaled) s.elapsed_s *= 7.5;
    const ScalingFit a = fit_scaling(base);
    const ScalingFit b = fit_scaling(scaled);
    CHECK(std::abs(a.beta - b.beta) <= 1e-9);
}

TEST_CASE("median absorbs one outlier repeat per setting") {
    const auto base = power_law_samples(0.5, 1.0, 5);
    auto spiked = base;
    for (int batch : {1, 2, 4, 8, 16, 32}) {
        for (auto& s : spiked) {
            if (s.batch_size == batch && s.repeat_index == 0) {
                s.elapsed_s *= 1000.0;  // one outlier per setting
                break;
            }
        }
    }
    const ScalingFit a = fit_scaling(base);
    const ScalingFit b = fit_scaling(spiked);
    CHECK(a.beta == b.beta);
    CHECK(a.r2 == b.r2);
}

TEST_CASE("fit_scaling needs two distinct batch sizes") {
    std::vector<BenchSample> one = {{"m", 4, 32, 32, 0, 0.5}, {"m", 4, 32, 32, 1, 0.6}};
    CHECK_THROWS_AS(fit_scaling(one), std::invalid_argument);
    CHECK_THROWS_AS(fit_scaling({}), std::invalid_argument);
}

TEST_CASE("fit_pixel_scaling handles exact and degenerate laws") {
    std::vector<BenchSample> linear, constant;
    for (int res : {64, 128, 256, 512}) {
        for (int rep = 0; rep < 3; ++rep) {
            const double pixels = static_cast<double>(res) * res;
            linear.push_back(BenchSample{"m", 2, res, res, rep, 3e-9 * pixels});
            constant.push_back(BenchSample{"m", 2, res, res, rep, 0.125});
        }
    }
    const ScalingFit lin = fit_pixel_scaling(linear);
    CHECK(std::abs(lin.beta - 1.0) <= 1e-9);
    CHECK(std::abs(lin.r2 - 1.0) <= 1e-9);

    const ScalingFit flat = fit_pixel_scaling(constant);
    CHECK(flat.beta == 0.0);
    CHECK(flat.r2 == 1.0);  // the flat fit is exact
}

TEST_CASE("run_bench produces |batches| x repeats samples with positive times") {
    // The standard protocol: 6 doubling batch sizes x 15 repeats = 90 rows,
    // which serialize to a 91-line CSV.
    const auto standard = run_bench("random", {1, 2, 4, 8, 16, 32}, 32, 15, 11);
    CHECK(standard.size() == 90);
    const auto dir = fresh_dir("standard");
    emit_csv(standard, dir / "s.csv");
    CHECK(count_lines(dir / "s.csv") == 91);

    const auto samples = run_bench("random", {1, 2}, 32, 3, 11);
    REQUIRE(samples.size() == 6);
    for (const auto& s : samples) {
        CHECK(s.elapsed_s > 0.0);
        CHECK(s.method == "random");
        CHECK(s.height == 32);
    }
    CHECK_THROWS_AS(run_bench("nope", {1, 2}, 32, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_bench("random", {}, 32, 1, 0), std::invalid_argument);

    const auto par = run_bench("random", {1}, 32, 1, 11, /*parallel=*/true);
    REQUIRE(par.size() == 1);
    CHECK(par[0].method == "random+omp");
}

TEST_CASE("synthetic batches are pure in the seed") {
    const auto a = make_synthetic_batch(3, 2, 16, 16);
    const auto b = make_synthetic_batch(3, 2, 16, 16);
    REQUIRE(a.size() == 2);
    CHECK(a[0].pixels() == b[0].pixels());
    CHECK(a[1].pixels() == b[1].pixels());
    const auto c = make_synthetic_batch(4, 1, 16, 16);
    CHECK(a[0].pixels() != c[0].pixels());
}

TEST_CASE("samples CSV round trips bit-exactly into the same fit") {
    const auto dir = fresh_dir("csv");
    const auto samples = run_bench("random", {1, 2, 4}, 32, 2, 5);
    REQUIRE(samples.size() == 6);
    emit_csv(samples, dir / "s.csv");
    CHECK(count_lines(dir / "s.csv") == 7);  // header + 6 rows

    const auto parsed = parse_samples_csv(dir / "s.csv");
    REQUIRE(parsed.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(std::memcmp(&parsed[i].elapsed_s, &samples[i].elapsed_s,
                          sizeof(double)) == 0);
    }
    const ScalingFit from_live = fit_scaling(samples);
    const ScalingFit from_csv = fit_scaling(parsed);
    CHECK(std::memcmp(&from_live.beta, &from_csv.beta, sizeof(double)) == 0);
    CHECK(std::memcmp(&from_live.r2, &from_csv.r2, sizeof(double)) == 0);
    CHECK(from_live.trend == from_csv.trend);
}

TEST_CASE("empty sample list emits a header-only CSV") {
    const auto dir = fresh_dir("empty");
    emit_csv(std::vector<BenchSample>{}, dir / "e.csv");
    CHECK(count_lines(dir / "e.csv") == 1);
    CHECK(parse_samples_csv(dir / "e.csv").empty());
}

TEST_CASE("fits CSV uses the documented schema") {
    const auto dir = fresh_dir("fits");
    emit_csv(std::vector<ScalingFit>{{"gbgm", 0.95, 0.99, Trend::kLinear},
                                     {"x", 0.6, 0.9, Trend::kSublinear}},
             dir / "f.csv");
    std::ifstream in(dir / "f.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "method,beta,r2,trend");
    std::getline(in, line);
    CHECK(line == "gbgm,0.95,0.99,Linear");
    std::getline(in, line);
    CHECK(line == "x,0.6,0.9,Sublinear");
}

TEST_CASE("parse_samples_csv rejects malformed input") {
    const auto dir = fresh_dir("badcsv");
    std::ofstream(dir / "bad1.csv") << "wrong,header\n";
    CHECK_THROWS_AS(parse_samples_csv(dir / "bad1.csv"), CorruptFileError);
    std::ofstream(dir / "bad2.csv")
        << "method,batch,h,w,repeat,elapsed_s\nm,1,2\n";
    CHECK_THROWS_AS(parse_samples_csv(dir / "bad2.csv"), CorruptFileError);
    std::ofstream(dir / "bad3.csv")
        << "method,batch,h,w,repeat,elapsed_s\nm,1,32,32,0,fast\n";
    CHECK_THROWS_AS(parse_samples_csv(dir / "bad3.csv"), CorruptFileError);
    CHECK_THROWS_AS(parse_samples_csv(dir / "missing.csv"), FileNotFoundError);
}

TEST_CASE("proportional block sizes follow the 1/7-then-1/8 rule") {
    CHECK(proportional_block_size(224) == 32);
    CHECK(proportional_block_size(64) == 8);
    CHECK(proportional_block_size(128) == 16);
    CHECK(proportional_block_size(256) == 32);
    CHECK(proportional_block_size(512) == 64);
    CHECK(proportional_block_size(32) == 4);
    CHECK_THROWS_AS(proportional_block_size(97), std::invalid_argument);
}

TEST_CASE("pixel scaling validates its resolution list") {
    CHECK_THROWS_AS(pixel_scaling("gbgm", {64, 128}, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(pixel_scaling("gbgm", {64, 64, 64}, 1, 0), std::invalid_argument);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "gbgm/cli_config.hpp"
#include "gbgm/io.hpp"
#include "gbgm/rng.hpp"

using namespace gbgm;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return std::getenv("GBGM_CLI"); }

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() /
                         ("gbgm_cli_" + std::to_string(::getpid()) + "_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path log = fs::temp_directory_path() /
                         ("gbgm_cli_out_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++) + ".log");
    const std::string cmd =
        std::string(cli_path()) + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::string output((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
    fs::remove(log);
    return RunResult{WEXITSTATUS(status), std::move(output)};
}

// A 32x32 gradient PGM whose purity varies across patches.
fs::path write_test_image(const fs::path& dir, const std::string& name = "in.pgm") {
    RngStream rng(404);
    std::vector<double> px(32 * 32);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            px[y * 32 + x] = std::min(1.0, (x / 31.0) * 0.7 + rng.uniform01() * 0.3);
        }
    }
    const Image img(32, 32, 1, px);
    const fs::path p = dir / name;
    save_image(img, p);
    return p;
}

int count_zero_pixels(const fs::path& mask_path) {
    const Image mask = load_image(mask_path);
    int zeros = 0;
    for (double v : mask.pixels()) zeros += v == 0.0;
    return zeros;
}

std::vector<unsigned char> file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("no arguments prints usage and exits 1") {
    REQUIRE(cli_path() != nullptr);
    const RunResult r = run_cli("");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("Usage") != std::string::npos);
}

TEST_CASE("--help exits 0") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("mask --help").exit_code == 0);
}

TEST_CASE("mask single removes 6 patches of a 32x32 image") {
    const auto dir = fresh_dir("mask_single");
    const auto input = write_test_image(dir);
    const auto mask_path = dir / "mask.pgm";
    const RunResult r = run_cli("mask --method single --s1 4 --ratio 0.10 --seed 7 " +
                                input.string() + " --out " + mask_path.string());
    CHECK(r.exit_code == 0);
    CHECK(count_zero_pixels(mask_path) == 96);  // 6 patches x 16 px

    // Identical invocation reproduces the file byte for byte.
    const auto again = dir / "mask2.pgm";
    run_cli("mask --method single --s1 4 --ratio 0.10 --seed 7 " + input.string() +
            " --out " + again.string());
    CHECK(file_bytes(mask_path) == file_bytes(again));
}

TEST_CASE("mask gbgm writes a mask plus optional masked image") {
    const auto dir = fresh_dir("mask_gbgm");
    const auto input = write_test_image(dir);
    const RunResult r = run_cli("mask --method gbgm --s1 4 --seed 3 " + input.string() +
                                " --out " + (dir / "m.png").string() +
                                " --masked-out " + (dir / "masked.png").string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "m.png"));
    CHECK(fs::exists(dir / "masked.png"));
    const Image mask = load_image(dir / "m.png");
    for (double v : mask.pixels()) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("usage and runtime errors map to exit codes 1 and 2") {
    const auto dir = fresh_dir("errors");
    const auto input = write_test_image(dir);
    CHECK(run_cli("mask --method nosuch " + input.string() + " --out " +
                  (dir / "m.pgm").string())
              .exit_code == 1);
    CHECK(run_cli("mask --bogus-flag x").exit_code == 1);
    CHECK(run_cli("mask " + (dir / "missing.pgm").string() + " --out " +
                  (dir / "m.pgm").string())
              .exit_code == 2);
    // 32x32 input with the default s1 = 32 leaves no second-stage geometry:
    // 225x224-style divisibility failures also land on exit 2.
    const RunResult bad = run_cli("mask --method gbgm --s1 24 " + input.string() +
                                  " --out " + (dir / "m.pgm").string());
    CHECK(bad.exit_code == 2);
}

TEST_CASE("config file fills unset flags and flags win") {
    const auto dir = fresh_dir("config");
    const auto input = write_test_image(dir);
    {
        std::ofstream cfg(dir / "gbgm.conf");
        cfg << "# single-stage small-image setup\n"
            << "method = single\n"
            << "s1 = 4\n"
            << "ratio = 0.10\n"
            << "seed = 7\n";
    }
    const auto from_cfg = dir / "a.pgm";
    CHECK(run_cli("mask --config " + (dir / "gbgm.conf").string() + " " +
                  input.string() + " --out " + from_cfg.string())
              .exit_code == 0);
    const auto from_flags = dir / "b.pgm";
    run_cli("mask --method single --s1 4 --ratio 0.10 --seed 7 " + input.string() +
            " --out " + from_flags.string());
    CHECK(file_bytes(from_cfg) == file_bytes(from_flags));

    // A flag overrides the file: ratio 0.20 -> 13 patches.
    const auto overridden = dir / "c.pgm";
    CHECK(run_cli("mask --config " + (dir / "gbgm.conf").string() + " --ratio 0.20 " +
                  input.string() + " --out " + overridden.string())
              .exit_code == 0);
    CHECK(count_zero_pixels(overridden) == 13 * 16);
}

TEST_CASE("config file errors name the offending line") {
    const auto dir = fresh_dir("badconfig");
    const auto input = write_test_image(dir);
    {
        std::ofstream cfg(dir / "bad.conf");
        cfg << "s1 = thirty\n";
    }
    const RunResult r = run_cli("mask --config " + (dir / "bad.conf").string() + " " +
                                input.string() + " --out " + (dir / "m.pgm").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("bad.conf:1") != std::string::npos);
    CHECK(r.output.find("thirty") != std::string::npos);

    {
        std::ofstream cfg(dir / "unknown.conf");
        cfg << "s1 = 4\nwat = 9\n";
    }
    const RunResult u = run_cli("mask --config " + (dir / "unknown.conf").string() +
                                " " + input.string() + " --out " +
                                (dir / "m.pgm").string());
    CHECK(u.exit_code == 1);
    CHECK(u.output.find("unknown key 'wat'") != std::string::npos);
}

TEST_CASE("parse_config_file returns a typed overlay") {
    const auto dir = fresh_dir("overlay");
    {
        std::ofstream cfg(dir / "o.conf");
        cfg << "\n# comment only\ns1 = 32\nepsilon = 1e-5  # trailing comment\n";
    }
    const CliOverlay o = parse_config_file(dir / "o.conf");
    REQUIRE(o.s1.has_value());
    CHECK(*o.s1 == 32);
    REQUIRE(o.epsilon.has_value());
    CHECK(*o.epsilon == 1e-5);
    CHECK(!o.method.has_value());

    const CliOverlay empty = parse_config_file(dir / "o.conf");
    CHECK(!empty.ratio.has_value());
}

TEST_CASE("GBGM_SEED environment variable supplies the default seed") {
    const auto dir = fresh_dir("envseed");
    const auto input = write_test_image(dir);
    const std::string base = "mask --method gbgm --s1 4 " + input.string() + " --out ";
    run_cli(base + (dir / "flag.pgm").string() + " --seed 5");
    const std::string env_cmd = "GBGM_SEED=5 " + std::string(cli_path()) + " " + base +
                                (dir / "env.pgm").string() + " >/dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    CHECK(file_bytes(dir / "flag.pgm") == file_bytes(dir / "env.pgm"));
}

TEST_CASE("bench emits the documented CSV") {
    const auto dir = fresh_dir("bench");
    const auto csv = dir / "b.csv";
    const RunResult r = run_cli("bench --methods gbgm --batches 1,2,4 --repeats 2 "
                                "--resolution 32 --seed 1 --out " + csv.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        if (lines == 0) CHECK(line == "method,batch,h,w,repeat,elapsed_s");
        ++lines;
    }
    CHECK(lines == 7);  // header + 3 batches x 2 repeats
    CHECK(r.output.find("beta=") != std::string::npos);
}

TEST_CASE("viz writes every intermediate panel") {
    const auto dir = fresh_dir("viz");
    const auto input = write_test_image(dir);
    const auto out = dir / "panels";
    const RunResult r =
        run_cli("viz --s1 8 --seed 2 " + input.string() + " --out-dir " + out.string());
    CHECK(r.exit_code == 0);
    for (const char* name :
         {"original.png", "grid_overlay.png", "gb_partition.png", "purity_stage1.pgm",
          "purity_heatmap.png", "m1.pgm", "m2.pgm", "importance.pgm",
          "importance_norm.pgm", "mask_lowres.pgm", "mask.png", "masked.png"}) {
        CHECK_MESSAGE(fs::exists(out / name), name);
    }
}

TEST_CASE("batch masks a directory and matches single-image runs") {
    const auto dir = fresh_dir("batch");
    const auto in_dir = dir / "data";
    fs::create_directories(in_dir);
    write_test_image(in_dir, "a.pgm");
    write_test_image(in_dir, "b.pgm");
    write_test_image(in_dir, "c.pgm");
    const auto out_dir = dir / "out";
    const RunResult r = run_cli("batch --method single --s1 4 --seed 9 " +
                                in_dir.string() + " --out-dir " + out_dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out_dir / "a_mask.pgm"));
    CHECK(fs::exists(out_dir / "b_mask.pgm"));
    CHECK(fs::exists(out_dir / "c_mask.pgm"));

    // Same file and index through `mask` gives the identical mask.
    const auto solo = dir / "solo.pgm";
    run_cli("mask --method single --s1 4 --seed 9 --index 1 " +
            (in_dir / "b.pgm").string() + " --out " + solo.string());
    CHECK(file_bytes(solo) == file_bytes(out_dir / "b_mask.pgm"));

    // --write-masked adds the masked images alongside the masks.
    const auto masked_dir = dir / "out_masked";
    CHECK(run_cli("batch --method single --s1 4 --seed 9 --write-masked " +
                  in_dir.string() + " --out-dir " + masked_dir.string())
              .exit_code == 0);
    CHECK(fs::exists(masked_dir / "a_masked.png"));
    CHECK(fs::exists(masked_dir / "c_masked.png"));
}

TEST_CASE("mask accepts the bilinear and mask_highest variants") {
    const auto dir = fresh_dir("variants");
    const auto input = write_test_image(dir);
    const RunResult r = run_cli(
        "mask --method gbgm --s1 8 --interp bilinear --direction mask_highest "
        "--ratio 0.2 --ratio2 0.25 --seed 6 " +
        input.string() + " --out " + (dir / "m.pgm").string());
    CHECK(r.exit_code == 0);
    const Image mask = load_image(dir / "m.pgm");
    for (double v : mask.pixels()) CHECK((v == 0.0 || v == 1.0));
    CHECK(run_cli("mask --method gbgm --interp cubic " + input.string() + " --out " +
                  (dir / "x.pgm").string())
              .exit_code == 1);
}

TEST_SUITE_END();

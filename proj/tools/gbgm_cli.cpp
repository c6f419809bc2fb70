#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbgm/batch.hpp"
#include "gbgm/bench.hpp"
#include "gbgm/cli_config.hpp"
#include "gbgm/granular_ball.hpp"
#include "gbgm/io.hpp"
#include "gbgm/methods.hpp"
#include "gbgm/pipeline.hpp"

namespace {

using namespace gbgm;

Interp parse_interp(const std::string& name) {
    if (name == "nearest") return Interp::kNearest;
    if (name == "bilinear") return Interp::kBilinear;
    throw std::invalid_argument("interp must be 'nearest' or 'bilinear', got '" + name + "'");
}

SelectionDirection parse_direction(const std::string& name) {
    if (name == "mask_lowest") return SelectionDirection::kMaskLowest;
    if (name == "mask_highest") return SelectionDirection::kMaskHighest;
    throw std::invalid_argument(
        "direction must be 'mask_lowest' or 'mask_highest', got '" + name + "'");
}

FillMode parse_fill(const std::string& name) {
    if (name == "zero") return FillMode::kZero;
    if (name == "mean") return FillMode::kMean;
    throw std::invalid_argument("fill must be 'zero' or 'mean', got '" + name + "'");
}

struct CommonOpts {
    std::string method = "gbgm";
    int s1 = 32;
    double ratio = 0.10;
    double ratio2 = 0.10;
    double epsilon = 1e-6;
    std::string interp = "nearest";
    std::string direction = "mask_lowest";
    std::string fill = "zero";
    std::uint64_t seed = 0;
    std::string config_file;

    // Option handles, used to let config-file values fill in unset flags.
    CLI::Option* method_opt = nullptr;
    CLI::Option* s1_opt = nullptr;
    CLI::Option* ratio_opt = nullptr;
    CLI::Option* ratio2_opt = nullptr;
    CLI::Option* epsilon_opt = nullptr;
    CLI::Option* interp_opt = nullptr;
    CLI::Option* direction_opt = nullptr;
    CLI::Option* fill_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common_flags(CLI::App* sub, CommonOpts& o) {
    o.method_opt = sub->add_option("--method", o.method,
                                   "gbgm, single, erasing, gridmask, has, random "
                                   "(gbgm-ref times the serial reference)");
    o.s1_opt = sub->add_option("--s1", o.s1,
                               "coarse block side for gbgm; patch side for "
                               "single/has/random");
    o.ratio_opt = sub->add_option("--ratio", o.ratio, "stage-1 mask ratio in (0,1)");
    o.ratio2_opt = sub->add_option("--ratio2", o.ratio2, "stage-2 mask ratio in (0,1)");
    o.epsilon_opt = sub->add_option("--epsilon", o.epsilon, "stabilizer in (0,0.5)");
    o.interp_opt = sub->add_option("--interp", o.interp, "nearest|bilinear");
    o.direction_opt =
        sub->add_option("--direction", o.direction, "mask_lowest|mask_highest");
    o.fill_opt = sub->add_option("--fill", o.fill, "zero|mean fill for masked pixels");
    o.seed_opt = sub->add_option("--seed", o.seed, "master RNG seed")
                     ->envname("GBGM_SEED");
    sub->add_option("--config", o.config_file,
                    "key = value config file; flags take precedence");
}

void apply_overlay(CommonOpts& o) {
    if (o.config_file.empty()) return;
    const CliOverlay overlay = parse_config_file(o.config_file);
    if (overlay.method && o.method_opt->count() == 0) o.method = *overlay.method;
    if (overlay.s1 && o.s1_opt->count() == 0) o.s1 = *overlay.s1;
    if (overlay.ratio && o.ratio_opt->count() == 0) o.ratio = *overlay.ratio;
    if (overlay.ratio2 && o.ratio2_opt->count() == 0) o.ratio2 = *overlay.ratio2;
    if (overlay.epsilon && o.epsilon_opt->count() == 0) o.epsilon = *overlay.epsilon;
    if (overlay.interp && o.interp_opt->count() == 0) o.interp = *overlay.interp;
    if (overlay.direction && o.direction_opt->count() == 0)
        o.direction = *overlay.direction;
    if (overlay.fill && o.fill_opt->count() == 0) o.fill = *overlay.fill;
    if (overlay.seed && o.seed_opt->count() == 0) o.seed = *overlay.seed;
}

MethodParams build_params(const CommonOpts& o) {
    MethodParams p;
    p.config.s1 = o.s1;
    p.config.mask_ratio_stage1 = o.ratio;
    p.config.mask_ratio_stage2 = o.ratio2;
    p.config.epsilon = o.epsilon;
    p.config.interpolation = parse_interp(o.interp);
    p.config.selection_direction = parse_direction(o.direction);
    p.config.seed = o.seed;
    p.fill = parse_fill(o.fill);
    if (!is_method(o.method)) {
        throw std::invalid_argument("unknown method: " + o.method);
    }
    return p;
}

std::pair<int, int> parse_resize(const std::string& spec) {
    const auto x = spec.find('x');
    try {
        if (x == std::string::npos) {
            const int n = std::stoi(spec);
            return {n, n};
        }
        return {std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("resize must be 'N' or 'WxH', got '" + spec + "'");
    }
}

Image grid_mask_to_image(const BlockMask& mask) {
    std::vector<double> values(mask.bits.begin(), mask.bits.end());
    return Image(mask.grid.cols, mask.grid.rows, 1, std::move(values));
}

// Granular-ball mosaic over fine-grid block means: each block becomes a
// point (row, col, scaled mean intensity), the cover is computed, and every
// block takes its ball's mean intensity.
Image ball_mosaic(const IntensityGrid& intensity, const GridSpec& fine) {
    const int s = fine.block_size;
    std::vector<double> means(fine.cell_count());
    for (int i = 0; i < fine.rows; ++i) {
        for (int j = 0; j < fine.cols; ++j) {
            double sum = 0.0;
            for (int y = i * s; y < (i + 1) * s; ++y) {
                for (int x = j * s; x < (j + 1) * s; ++x) {
                    sum += intensity.at(y, x);
                }
            }
            means[i * fine.cols + j] = sum / (s * s);
        }
    }

    const double weight = std::max(fine.rows, fine.cols);
    std::vector<Point> points;
    points.reserve(means.size());
    for (int i = 0; i < fine.rows; ++i) {
        for (int j = 0; j < fine.cols; ++j) {
            points.push_back(Point{static_cast<double>(i), static_cast<double>(j),
                                   weight * means[i * fine.cols + j]});
        }
    }
    const auto balls = cover(std::move(points), SplitThreshold{1.5});

    std::vector<double> mosaic(means.size(), 0.0);
    for (const GranularBall& ball : balls) {
        const double level =
            std::clamp(ball.center()[2] / weight, 0.0, 1.0);
        for (const Point& p : ball.points()) {
            const int cell = static_cast<int>(p[0]) * fine.cols + static_cast<int>(p[1]);
            mosaic[cell] = level;
        }
    }

    const int h = fine.pixel_height();
    const int w = fine.pixel_width();
    std::vector<double> px(static_cast<std::size_t>(h) * w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            px[static_cast<std::size_t>(y) * w + x] =
                mosaic[(y / s) * fine.cols + (x / s)];
        }
    }
    return Image(w, h, 1, std::move(px));
}

Image grid_overlay(const Image& image, int block) {
    Image out = image;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            if (y % block == 0 || x % block == 0) {
                for (int c = 0; c < image.channels(); ++c) out.at(y, x, c) = 1.0;
            }
        }
    }
    return out;
}

int run_mask(const CommonOpts& common, const std::string& input,
             const std::string& out, const std::string& masked_out,
             std::uint64_t index, const std::string& resize) {
    const MethodParams params = build_params(common);
    Image image = load_image(input);
    if (!resize.empty()) {
        const auto [w, h] = parse_resize(resize);
        image = resize_nearest(image, w, h);
    }
    const Method fn = make_method(common.method, params);
    RngStream rng = derive_stream(common.seed, index);
    const AugmentOutput result = fn(image, rng);
    if (result.mask) {
        save_mask(*result.mask, out);
        if (!masked_out.empty()) save_image(result.image, masked_out);
    } else {
        // Baselines have no mask; the augmented image is the output.
        save_image(result.image, out);
        if (!masked_out.empty()) save_image(result.image, masked_out);
    }
    return 0;
}

int run_viz(const CommonOpts& common, const std::string& input,
            const std::filesystem::path& out_dir, std::uint64_t index) {
    MethodParams params = build_params(common);
    const Image image = load_image(input);
    std::filesystem::create_directories(out_dir);

    GbgmStages stages;
    RngStream rng = derive_stream(common.seed, index);
    const BlockMask mask = gbgm_mask_stages(image, params.config, rng, &stages);
    const IntensityGrid intensity = to_intensity(image);

    save_image(image, out_dir / "original.png");
    save_image(grid_overlay(image, params.config.s1), out_dir / "grid_overlay.png");
    save_image(ball_mosaic(intensity, stages.fine_grid), out_dir / "gb_partition.png");

    // Raw intermediates as 16-bit PGM with fixed documented scales:
    // purity and normalized importance x65535, neighbor counts x65535/9.
    save_gray16(stages.coarse_purity.scores, stages.coarse_grid.cols,
                stages.coarse_grid.rows, 65535.0, out_dir / "purity_stage1.pgm");
    save_gray16(stages.importance.values, stages.fine_grid.cols, stages.fine_grid.rows,
                65535.0 / 9.0, out_dir / "importance.pgm");
    save_gray16(stages.normalized.values, stages.fine_grid.cols, stages.fine_grid.rows,
                65535.0, out_dir / "importance_norm.pgm");

    // Human-viewable purity heatmap: normalized by its max, then upscaled.
    double max_score = 0.0;
    for (double v : stages.coarse_purity.scores) max_score = std::max(max_score, v);
    std::vector<double> heat(stages.coarse_purity.scores.size(), 0.0);
    if (max_score > 0.0) {
        for (std::size_t i = 0; i < heat.size(); ++i) {
            heat[i] = stages.coarse_purity.scores[i] / max_score;
        }
    }
    const Image heat_grid(stages.coarse_grid.cols, stages.coarse_grid.rows, 1, heat);
    save_image(resize_nearest(heat_grid, image.width(), image.height()),
               out_dir / "purity_heatmap.png");

    save_image(grid_mask_to_image(stages.m1), out_dir / "m1.pgm");
    save_image(grid_mask_to_image(stages.m2), out_dir / "m2.pgm");
    save_image(grid_mask_to_image(stages.lowres), out_dir / "mask_lowres.pgm");
    save_mask(mask, out_dir / "mask.png");
    save_image(apply_mask(image, mask, params.fill), out_dir / "masked.png");
    return 0;
}

int run_bench_cmd(const CommonOpts& common, const std::vector<std::string>& methods,
                  const std::vector<int>& batches, int resolution, int repeats,
                  const std::string& out, const std::string& fits_out,
                  bool pixel_mode, const std::vector<int>& resolutions, bool parallel) {
    std::vector<BenchSample> all_samples;
    std::vector<ScalingFit> fits;
    for (const std::string& method : methods) {
        std::vector<BenchSample> samples;
        std::optional<ScalingFit> fit;
        if (pixel_mode) {
            samples = run_pixel_bench(method, resolutions, repeats, common.seed, parallel);
            fit = fit_pixel_scaling(samples);
        } else {
            samples = run_bench(method, batches, resolution, repeats, common.seed, parallel);
            std::vector<int> distinct = batches;
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            if (distinct.size() >= 2) fit = fit_scaling(samples);
        }
        all_samples.insert(all_samples.end(), samples.begin(), samples.end());
        if (fit) {
            fits.push_back(*fit);
            std::cout << fit->method << ": beta=" << fit->beta << " r2=" << fit->r2
                      << " trend=" << to_string(fit->trend) << "\n";
        }
    }
    if (!out.empty()) emit_csv(all_samples, out);
    if (!fits_out.empty()) emit_csv(fits, fits_out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Granular-ball guided masking: structure-aware mask generation,\n"
                 "baseline augmentations and a scaling benchmark harness."};
    app.name("gbgm");
    app.require_subcommand(1);

    // mask
    auto* mask_cmd = app.add_subcommand("mask", "Mask a single image");
    CommonOpts mask_opts;
    std::string mask_input, mask_out, masked_out, resize;
    std::uint64_t mask_index = 0;
    mask_cmd->add_option("input", mask_input, "input image (.png/.pgm/.ppm)")->required();
    mask_cmd->add_option("--out", mask_out, "output mask (.pgm/.png); baselines write "
                                            "the augmented image here")->required();
    mask_cmd->add_option("--masked-out", masked_out, "also write the masked image");
    mask_cmd->add_option("--index", mask_index, "dataset index for the RNG stream");
    mask_cmd->add_option("--resize", resize, "pre-resize to N or WxH (nearest)");
    add_common_flags(mask_cmd, mask_opts);

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "Mask a dataset directory");
    CommonOpts batch_opts;
    std::string batch_in, batch_out_dir;
    std::string batch_glob = "**/*.{png,pgm,ppm}";
    int jobs = 0;
    bool write_masked = false;
    std::string mask_ext = ".pgm";
    batch_cmd->add_option("input_dir", batch_in, "dataset directory")->required();
    batch_cmd->add_option("--out-dir", batch_out_dir, "output directory")->required();
    batch_cmd->add_option("--glob", batch_glob, "file pattern relative to input_dir");
    batch_cmd->add_option("--jobs", jobs, "worker threads (0 = hardware)");
    batch_cmd->add_flag("--write-masked", write_masked, "also write masked images");
    batch_cmd->add_option("--mask-ext", mask_ext, "mask file extension (.pgm/.png)");
    add_common_flags(batch_cmd, batch_opts);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Time methods and fit scaling laws");
    CommonOpts bench_opts;
    std::vector<std::string> bench_methods{"gbgm"};
    std::vector<int> batches{1, 2, 4, 8, 16, 32};
    std::vector<int> resolutions{64, 128, 256, 512};
    int resolution = 224;
    int repeats = 15;
    std::string bench_out, fits_out;
    bool pixel_mode = false;
    bool parallel = false;
    bench_cmd->add_option("--methods", bench_methods, "comma-separated method list")
        ->delimiter(',');
    bench_cmd->add_option("--batches", batches, "comma-separated batch sizes")
        ->delimiter(',');
    bench_cmd->add_option("--resolution", resolution, "square input resolution");
    bench_cmd->add_option("--repeats", repeats, "timed repeats per setting");
    bench_cmd->add_option("--out", bench_out, "samples CSV path");
    bench_cmd->add_option("--fits-out", fits_out, "fits CSV path");
    bench_cmd->add_flag("--pixel-scaling", pixel_mode,
                        "regress time against pixels over --resolutions");
    bench_cmd->add_option("--resolutions", resolutions,
                          "comma-separated resolutions for --pixel-scaling")
        ->delimiter(',');
    bench_cmd->add_flag("--parallel", parallel,
                        "allow OpenMP kernels in the timed region (labeled '+omp')");
    add_common_flags(bench_cmd, bench_opts);

    // viz
    auto* viz_cmd = app.add_subcommand("viz", "Dump pipeline intermediates as images");
    CommonOpts viz_opts;
    std::string viz_input, viz_out_dir;
    std::uint64_t viz_index = 0;
    viz_cmd->add_option("input", viz_input, "input image")->required();
    viz_cmd->add_option("--out-dir", viz_out_dir, "output directory")->required();
    viz_cmd->add_option("--index", viz_index, "dataset index for the RNG stream");
    add_common_flags(viz_cmd, viz_opts);

    if (argc <= 1) {
        std::cerr << app.help() << std::endl;
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    // Usage-level validation: config files, enum flags, method names.
    CommonOpts* active = nullptr;
    if (app.got_subcommand(mask_cmd)) active = &mask_opts;
    if (app.got_subcommand(batch_cmd)) active = &batch_opts;
    if (app.got_subcommand(bench_cmd)) active = &bench_opts;
    if (app.got_subcommand(viz_cmd)) active = &viz_opts;
    try {
        apply_overlay(*active);
        build_params(*active);
    } catch (const std::exception& e) {
        std::cerr << "gbgm: " << e.what() << std::endl;
        return 1;
    }

    try {
        if (app.got_subcommand(mask_cmd)) {
            return run_mask(mask_opts, mask_input, mask_out, masked_out, mask_index,
                            resize);
        }
        if (app.got_subcommand(batch_cmd)) {
            BatchOptions options;
            options.method = batch_opts.method;
            options.params = build_params(batch_opts);
            options.jobs = jobs;
            options.write_masked = write_masked;
            options.mask_ext = mask_ext;
            const BatchResult result =
                run_batch(batch_in, batch_glob, batch_out_dir, options);
            std::cout << "processed " << result.processed << " image(s), wrote "
                      << result.outputs.size() << " file(s)" << std::endl;
            return 0;
        }
        if (app.got_subcommand(bench_cmd)) {
            return run_bench_cmd(bench_opts, bench_methods, batches, resolution,
                                 repeats, bench_out, fits_out, pixel_mode, resolutions,
                                 parallel);
        }
        return run_viz(viz_opts, viz_input, viz_out_dir, viz_index);
    } catch (const std::exception& e) {
        std::cerr << "gbgm: " << e.what() << std::endl;
        return 2;
    }
}

#include "gbgm/batch.hpp"

#include <algorithm>
#include <stdexcept>

#include "gbgm/io.hpp"
#include "gbgm/parallel.hpp"
#include "gbgm/rng.hpp"

namespace gbgm {

namespace {

// Flattens a relative path into a single file-name stem so entries from
// nested directories cannot collide in the output directory.
std::string output_stem(const std::filesystem::path& file,
                        const std::filesystem::path& root) {
    std::string rel = file.lexically_relative(root).replace_extension("").generic_string();
    std::replace(rel.begin(), rel.end(), '/', '_');
    return rel;
}

}  // namespace

BatchResult run_batch(const std::filesystem::path& input_dir, std::string_view glob,
                      const std::filesystem::path& out_dir, const BatchOptions& options) {
    const std::vector<DatasetEntry> entries = ingest_dir(input_dir, glob);
    std::filesystem::create_directories(out_dir);
    const Method fn = make_method(options.method, options.params);

    const int jobs = options.jobs > 0 ? options.jobs : par::max_threads();
    std::vector<std::vector<std::filesystem::path>> written(entries.size());
    std::vector<std::string> errors;

    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const DatasetEntry& entry = entries[i];
            const Image image = load_image(entry.path);
            RngStream rng = derive_stream(options.params.config.seed, entry.index);
            const AugmentOutput out = fn(image, rng);
            const std::string stem = output_stem(entry.path, input_dir);
            if (out.mask) {
                const auto mask_path = out_dir / (stem + "_mask" + options.mask_ext);
                save_mask(*out.mask, mask_path);
                written[i].push_back(mask_path);
                if (options.write_masked) {
                    const auto masked_path = out_dir / (stem + "_masked.png");
                    save_image(out.image, masked_path);
                    written[i].push_back(masked_path);
                }
            } else {
                const auto aug_path = out_dir / (stem + "_aug.png");
                save_image(out.image, aug_path);
                written[i].push_back(aug_path);
            }
        } catch (const std::exception& e) {
#pragma omp critical(gbgm_batch_errors)
            errors.push_back(entries[i].path.string() + ": " + e.what());
        }
    }

    if (!errors.empty()) {
        std::string message = "batch failed for " + std::to_string(errors.size()) +
                              " input(s):";
        for (const auto& e : errors) message += "\n  " + e;
        throw IoError(message);
    }

    BatchResult result;
    result.processed = entries.size();
    for (auto& paths : written) {
        for (auto& p : paths) result.outputs.push_back(std::move(p));
    }
    return result;
}

}  // namespace gbgm

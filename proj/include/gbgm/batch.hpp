#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gbgm/methods.hpp"

namespace gbgm {

/// Dataset-directory processing. Every image gets its own RNG stream derived
/// from (seed, dataset index), so output is byte-identical no matter how
/// many worker threads run or in which order entries are scheduled.
struct BatchOptions {
    std::string method = "gbgm";
    MethodParams params;
    int jobs = 0;              // worker threads; 0 = hardware default, 1 = serial
    bool write_masked = false; // also write the masked image for mask methods
    std::string mask_ext = ".pgm";
};

struct BatchResult {
    std::size_t processed = 0;
    std::vector<std::filesystem::path> outputs;
};

// Ingests input_dir (lexicographic order fixes the indices), applies the
// method per entry and writes outputs under out_dir: "<stem>_mask<ext>" for
// mask-producing methods (plus "<stem>_masked.png" when requested),
// "<stem>_aug.png" for baselines. Errors inside workers are collected and
// rethrown after the loop finishes.
BatchResult run_batch(const std::filesystem::path& input_dir, std::string_view glob,
                      const std::filesystem::path& out_dir, const BatchOptions& options);

}  // namespace gbgm

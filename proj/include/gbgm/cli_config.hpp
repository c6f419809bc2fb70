#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace gbgm {

/// Values read from a `key = value` config file. Only keys present in the
/// file are set; command-line flags always take precedence over the overlay.
struct CliOverlay {
    std::optional<std::string> method;
    std::optional<int> s1;
    std::optional<double> ratio;
    std::optional<double> ratio2;
    std::optional<double> epsilon;
    std::optional<std::string> interp;
    std::optional<std::string> direction;
    std::optional<std::string> fill;
    std::optional<std::uint64_t> seed;
};

// Parses a config file of `key = value` lines with '#' comments. Unknown
// keys and malformed values raise std::invalid_argument naming the line.
CliOverlay parse_config_file(const std::filesystem::path& path);

}  // namespace gbgm

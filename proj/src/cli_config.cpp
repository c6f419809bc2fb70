#include "gbgm/cli_config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "gbgm/io.hpp"

namespace gbgm {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::filesystem::path& path, int line,
                       const std::string& what) {
    throw std::invalid_argument(path.filename().string() + ":" +
                                std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(const std::string& value, const std::filesystem::path& path, int line,
               const std::string& key) {
    T out{};
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(path, line, "malformed value for '" + key + "': '" + value + "'");
    }
    return out;
}

}  // namespace

CliOverlay parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FileNotFoundError("cannot open config file: " + path.string());
    }
    CliOverlay overlay;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(path, line_no, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail(path, line_no, "expected 'key = value', got '" + line + "'");
        }

        if (key == "method") {
            overlay.method = value;
        } else if (key == "s1") {
            overlay.s1 = parse_number<int>(value, path, line_no, key);
        } else if (key == "ratio") {
            overlay.ratio = parse_number<double>(value, path, line_no, key);
        } else if (key == "ratio2") {
            overlay.ratio2 = parse_number<double>(value, path, line_no, key);
        } else if (key == "epsilon") {
            overlay.epsilon = parse_number<double>(value, path, line_no, key);
        } else if (key == "interp") {
            overlay.interp = value;
        } else if (key == "direction") {
            overlay.direction = value;
        } else if (key == "fill") {
            overlay.fill = value;
        } else if (key == "seed") {
            overlay.seed = parse_number<std::uint64_t>(value, path, line_no, key);
        } else {
            fail(path, line_no, "unknown key '" + key + "'");
        }
    }
    return overlay;
}

}  // namespace gbgm

#include "gbgm/rng.hpp"

#include <cmath>

namespace gbgm {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t RngStream::mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    return mix(state_);
}

double RngStream::uniform01() {
    // 53 high bits, offset to the bin center: strictly inside (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    double r = lo + uniform01() * (hi - lo);
    // Rounding can land on a bound; nudge back inside the open interval.
    if (r <= lo) r = std::nextafter(lo, hi);
    if (r >= hi) r = std::nextafter(hi, lo);
    return r;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(RngStream::mix(master_seed + kGolden * (index + 1)), index);
}

}  // namespace gbgm

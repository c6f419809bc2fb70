#pragma once

#include <cstdint>

namespace gbgm {

// SplitMix64 stream (Steele, Lea & Flood; Vigna's fixed-increment variant).
// One stream per image keeps batch output independent of scheduling.
//
// Draw conventions, fixed for reproducibility across platforms:
//   - next_u64: state += 0x9E3779B97F4A7C15, then the 3-round mixer.
//   - uniform01: ((next_u64() >> 11) + 0.5) * 2^-53, strictly inside (0,1).
//   - uniform(lo,hi): lo + uniform01()*(hi-lo), strictly inside (lo,hi).
//   - uniform_int(n): Lemire multiply-shift of next_u64 into [0,n).
class RngStream {
public:
    explicit RngStream(std::uint64_t state, std::uint64_t stream_id = 0)
        : state_(state), stream_id_(stream_id) {}

    std::uint64_t next_u64();
    double uniform01();
    double uniform(double lo, double hi);
    std::uint64_t uniform_int(std::uint64_t n);  // n > 0

    std::uint64_t stream_id() const { return stream_id_; }

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t state_;
    std::uint64_t stream_id_;
};

// Stream for image `index` under `master_seed`:
// state seeded with mix(master_seed + GOLDEN * (index + 1)), so distinct
// indices yield statistically independent sequences and the mapping is pure.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

}  // namespace gbgm

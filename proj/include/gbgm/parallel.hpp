#pragma once

#include <cstddef>

namespace gbgm::par {

// Minimum number of output elements before a kernel bothers spawning an
// OpenMP team. Below this the fork/join overhead dominates.
inline constexpr std::size_t kGrain = 4096;

bool enabled();
void set_enabled(bool on);
int max_threads();

// Forces serial kernel execution for the lifetime of the guard.
// Used by the benchmark harness so timed regions are single-threaded
// unless parallel mode is requested explicitly.
class SerialGuard {
public:
    SerialGuard();
    ~SerialGuard();
    SerialGuard(const SerialGuard&) = delete;
    SerialGuard& operator=(const SerialGuard&) = delete;

private:
    bool saved_;
};

}  // namespace gbgm::par

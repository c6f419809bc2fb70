#include "gbgm/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gbgm::par {

namespace {
std::atomic<bool> g_enabled{true};
}

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }

void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

SerialGuard::SerialGuard() : saved_(enabled()) { set_enabled(false); }

SerialGuard::~SerialGuard() { set_enabled(saved_); }

}  // namespace gbgm::par

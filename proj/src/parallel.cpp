#include "fpf/parallel.hpp"

#include <atomic>

namespace fpf {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_max_threads(unsigned n) { g_threads = n; }

unsigned max_threads() {
    const unsigned n = g_threads.load();
    if (n != 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace fpf

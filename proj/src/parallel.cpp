#include "natsal/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace natsal {

void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn) {
    const int count = end - begin;
    if (count <= 0) return;
    if (threads < 1) threads = 1;
    threads = std::min(threads, count);
    if (threads == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads - 1));
    const int chunk = (count + threads - 1) / threads;
    for (int t = 1; t < threads; ++t) {
        const int lo = begin + t * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([=, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (int i = begin; i < std::min(end, begin + chunk); ++i) fn(i);
    for (std::thread& w : workers) w.join();
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NAT_BENCH_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace natsal

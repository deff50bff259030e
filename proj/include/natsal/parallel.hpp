#pragma once

#include <functional>

namespace natsal {

// Runs fn(i) for i in [begin, end) on up to `threads` workers. Workers take
// disjoint index blocks; callers must keep writes disjoint per index so
// results do not depend on the thread count.
void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn);

// Resolves a thread-count request: n > 0 as given, otherwise the
// NAT_BENCH_THREADS environment variable, otherwise the hardware count.
int resolve_threads(int requested);

} // namespace natsal

#pragma once

#include <cstddef>
#include <functional>

namespace advest {

// Degree of trial-level parallelism: ADVEST_THREADS if set and positive,
// otherwise the hardware concurrency (at least 1).
std::size_t thread_count();

// Runs body(i) for i in [0, count) on up to `threads` threads. Every index is
// visited exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. The exception of the lowest failing
// index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = thread_count());

}  // namespace advest

#pragma once

#include <cstddef>
#include <functional>

namespace propforge {

/// Worker count: PROPFORGE_THREADS if set and positive, else hardware
/// concurrency (at least 1).
unsigned worker_count();

/// Runs fn(i) for i in [0, n) across `threads` workers (0 = worker_count()).
/// Indices are handed out dynamically; callers must write results into
/// per-index slots so output order never depends on scheduling. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

}  // namespace propforge

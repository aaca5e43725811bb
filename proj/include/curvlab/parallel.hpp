#pragma once

#include <cstddef>
#include <functional>

namespace curvlab {

/// Worker count: `requested` if nonzero, else CURVLAB_THREADS, else the
/// hardware concurrency (at least 1).
std::size_t thread_count(std::size_t requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work items must
/// write only to their own slot; the first exception is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace curvlab

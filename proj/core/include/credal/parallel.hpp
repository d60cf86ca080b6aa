#pragma once

#include <cstddef>
#include <functional>

namespace credal {

/// Worker count: CREDAL_THREADS if set to a positive integer, otherwise the
/// number of hardware threads.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; callers write results by index, so output does not
/// depend on scheduling. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace credal

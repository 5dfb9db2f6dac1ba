#pragma once

#include <cstddef>
#include <functional>

namespace cmbp {

/// Number of worker threads for a requested count (0 = hardware concurrency).
int resolve_threads(int requested);

/// Runs fn(i) for every i in [0, n), split over nthreads workers.
/// fn must write disjoint outputs; results are independent of the thread count.
void parallel_for(std::size_t n, int nthreads, const std::function<void(std::size_t)>& fn);

}  // namespace cmbp

#ifndef TEMSIG_PARALLEL_HPP
#define TEMSIG_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace temsig {

/// Worker count for parallel maps: hardware concurrency, capped by the
/// TEMSIG_THREADS environment variable when set. Always >= 1.
int worker_count();

/// Runs fn(i) for i in [0, n). Work units must be independent and write to
/// disjoint state; results are then identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace temsig

#endif

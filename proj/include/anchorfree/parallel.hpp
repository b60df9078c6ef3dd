#pragma once

#include <cstddef>
#include <functional>

namespace anchorfree {

/// Worker count: hardware concurrency capped by ANCHORFREE_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Iterations must write disjoint outputs;
/// results are then independent of the worker count. The exception from
/// the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace anchorfree

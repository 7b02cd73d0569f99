#pragma once

#include <cstddef>
#include <functional>

namespace fracbs {

/// Worker count: FRACBS_THREADS if set, otherwise hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads.
/// Each index is processed exactly once; results must be written to disjoint slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fracbs

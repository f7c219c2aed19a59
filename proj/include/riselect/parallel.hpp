#pragma once

#include <cstddef>
#include <functional>

namespace riselect {

/// Worker count: RI_SELECT_THREADS when set (>= 1), else the hardware
/// concurrency.
unsigned worker_count();

/// Runs fn(0..n_tasks-1) on a small worker pool. Tasks must write to
/// disjoint state; the first exception is rethrown after all workers
/// join. fn must not depend on execution order.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& fn);

}  // namespace riselect

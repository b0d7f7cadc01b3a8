#pragma once

#include <cstddef>
#include <functional>

namespace wavkan {

/// Worker count from WAVKAN_THREADS, else hardware concurrency (at least 1).
[[nodiscard]] std::size_t default_workers();

/// Runs fn(task, worker) for task in [0, num_tasks). Tasks are dealt out
/// statically, so results that depend only on the task index are identical
/// for any worker count.
void parallel_for(std::size_t num_tasks, const std::function<void(std::size_t task, std::size_t worker)>& fn,
                  std::size_t workers = default_workers());

}  // namespace wavkan

#pragma once

#include <cstddef>
#include <functional>

namespace loewner {

/// Number of workers to use by default: the LOEWNER_FORGE_WORKERS
/// environment variable when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_worker_count();

/// Runs task(0), ..., task(count - 1) across the given number of worker
/// threads. Tasks are claimed from a shared atomic counter, so the
/// assignment of tasks to threads is nondeterministic; callers must key all
/// randomness and output slots by the task index alone, which makes every
/// artifact independent of the worker count. The first exception thrown by
/// any task is rethrown after all workers finish.
void run_indexed(std::size_t count, std::size_t workers,
                 const std::function<void(std::size_t)>& task);

}  // namespace loewner

#pragma once

#include <cstddef>
#include <functional>

namespace halfstep {

// HALFSTEP_WORKERS if set and positive, else hardware concurrency (at least 1).
int default_workers();

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are rethrown
// after all workers finish (the one for the smallest i wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace halfstep

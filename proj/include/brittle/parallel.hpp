#pragma once

#include <cstddef>
#include <functional>

namespace brittle {

// Worker count from BRITTLE_WORKERS, else the hardware concurrency (>= 1).
int worker_count();

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is run
// exactly once; the first exception is rethrown after all workers finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace brittle

#pragma once

#include <cstddef>
#include <functional>

namespace shc {

// Worker count from SHEARCHAOS_THREADS, else the available hardware parallelism.
unsigned worker_count();

// Runs body(i) for i in [0, n) on worker_count() threads. Each index is
// processed exactly once; the first exception thrown is rethrown after all
// workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace shc

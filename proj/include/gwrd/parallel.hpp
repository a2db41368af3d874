#pragma once

#include <cstddef>
#include <functional>

namespace gwrd {

// GWRD_THREADS when set to a positive integer, else the hardware count.
std::size_t worker_count();

// Runs f(i) for i in [0, n) on up to worker_count() threads. f must only
// write to state owned by index i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

} // namespace gwrd

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace nlslab {

// Number of worker threads used by parallel_for. Initialised from the
// NLSLAB_WORKERS environment variable, 1 when unset or invalid.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

// Runs body(i) for i in [0, count). Each index is visited exactly once; callers
// write results into per-index slots so the output order never depends on
// scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Pairwise (tree) summation with a fixed association order.
double pairwise_sum(std::span<const double> values);

}  // namespace nlslab

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace affgeo {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Callers write results into per-index slots, so the outcome
// does not depend on scheduling. The exception thrown at the smallest index,
// if any, is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int default_threads();

// Pairwise (cascade) summation in a fixed order.
double pairwise_sum(std::span<const double> values);

}  // namespace affgeo

#pragma once

#include <cstddef>
#include <span>

namespace chaoslab {

/// Sets the number of OpenMP worker lanes used by the parallel kernels.
/// Results never depend on this value: every reduction runs over a
/// topology fixed by the problem size alone.
void set_worker_lanes(int lanes);
int worker_lanes();

/// Pairwise (cascade) sum with a deterministic split pattern.
double pairwise_sum(std::span<const double> values);

}  // namespace chaoslab

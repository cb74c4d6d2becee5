#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "chaoslab/families.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/rng.hpp"

namespace testing {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Unsymmetrized random tensor with entries in [-1, 1].
inline chaoslab::PiecewiseKernel raw_kernel(unsigned q, const chaoslab::Partition& part,
                                            chaoslab::Philox4x32& eng) {
  std::vector<double> v(chaoslab::tensor_size(part.size(), q));
  for (double& x : v) x = 2.0 * eng.uniform() - 1.0;
  return chaoslab::PiecewiseKernel(q, part, std::move(v));
}

}  // namespace testing

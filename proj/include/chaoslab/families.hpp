#pragma once

#include <cstddef>

#include "chaoslab/kernel.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

/// h(i, j) = 1(i != j) / N. With unit masses, 2||f||^2 -> 2 (nu = 1).
IndexFunction canonical_family_q2(std::size_t n);

/// Fully symmetrized g(i,j) g(k,l) with every diagonal zeroed. g must be a
/// symmetric, zero-diagonal order-2 index function. The result is
/// nonnegative whenever g has constant sign.
IndexFunction pair_square_family_q4(const IndexFunction& g);

enum class RandomSign { mixed, nonnegative, nonpositive };

/// Symmetric kernel with entries drawn uniformly (in [-1,1], [0,1] or
/// [-1,0]) and then symmetrized.
PiecewiseKernel random_symmetric_kernel(unsigned q, const Partition& partition,
                                        Philox4x32& engine,
                                        RandomSign sign = RandomSign::mixed);

/// Random index function (symmetric, zero on diagonals).
IndexFunction random_index_function(unsigned q, std::size_t n, Philox4x32& engine,
                                    RandomSign sign = RandomSign::mixed);

/// Masses drawn uniformly from [lo, hi].
Partition random_partition(std::size_t n, double lo, double hi, Philox4x32& engine);

}  // namespace chaoslab

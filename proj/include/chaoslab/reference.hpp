#pragma once

// Serial reference implementations. They follow the defining formulas
// literally (explicit multi-indices, explicit permutation enumeration) and
// exist to cross-check the parallel kernels in tests and benchmarks.

#include "chaoslab/kernel.hpp"

namespace chaoslab::reference {

inline constexpr unsigned kMaxExhaustiveOrder = 6;

PiecewiseKernel contract(const PiecewiseKernel& f, const PiecewiseKernel& g,
                         unsigned r, unsigned l);

/// (1/q!) sum over all q! permutations; order <= kMaxExhaustiveOrder.
PiecewiseKernel symmetrize_exhaustive(const PiecewiseKernel& f);

double inner(const PiecewiseKernel& f, const PiecewiseKernel& g);

}  // namespace chaoslab::reference

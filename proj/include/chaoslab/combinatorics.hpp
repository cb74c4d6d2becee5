#pragma once

#include <cstdint>

namespace chaoslab {

// Exact integer combinatorics. Every function throws GuardError instead of
// wrapping around on 64-bit overflow.

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);
std::uint64_t factorial(unsigned n);
/// C(n, k); zero when k > n.
std::uint64_t binomial(unsigned n, unsigned k);

/// Number of sigma in S_{2M} with |{pi(1..M)} ∩ {sigma(1..M)}| = p for a
/// fixed pi, i.e. (M!)^2 C(M,p)^2.
std::uint64_t permutation_class_count(unsigned M, unsigned p);

}  // namespace chaoslab

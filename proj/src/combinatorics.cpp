#include "chaoslab/combinatorics.hpp"

#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw GuardError("integer overflow in combinatorial coefficient");
  }
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exponent; ++i) out = checked_mul(out, base);
  return out;
}

std::uint64_t factorial(unsigned n) {
  std::uint64_t out = 1;
  for (unsigned i = 2; i <= n; ++i) out = checked_mul(out, i);
  return out;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t out = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // out * (n - k + i) is divisible by i at every step.
    out = checked_mul(out, n - k + i) / i;
  }
  return out;
}

std::uint64_t permutation_class_count(unsigned M, unsigned p) {
  if (p > M) throw DomainError("permutation_class_count: p > M");
  const std::uint64_t f = factorial(M);
  const std::uint64_t b = binomial(M, p);
  return checked_mul(checked_mul(f, f), checked_mul(b, b));
}

}  // namespace chaoslab

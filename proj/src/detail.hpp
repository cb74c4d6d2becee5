#pragma once

// Internal helpers shared by the kernel translation units.

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "chaoslab/errors.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/parallel.hpp"

namespace chaoslab::detail {

inline constexpr unsigned kMaxDigits = 16;
using Digits = std::array<std::size_t, kMaxDigits>;

/// Row-major digits of `flat` (most significant first).
inline void decode(std::size_t flat, std::size_t base, unsigned order, Digits& out) {
  for (unsigned k = order; k-- > 0;) {
    out[k] = flat % base;
    flat /= base;
  }
}

inline std::size_t encode(const Digits& d, std::size_t base, unsigned order) {
  std::size_t flat = 0;
  for (unsigned k = 0; k < order; ++k) flat = flat * base + d[k];
  return flat;
}

/// Flat index of the sorted rearrangement of `flat`'s digits.
inline std::size_t orbit_representative(std::size_t flat, std::size_t base, unsigned order) {
  Digits d;
  decode(flat, base, order, d);
  std::sort(d.begin(), d.begin() + order);
  return encode(d, base, order);
}

inline bool has_repeated_digit(std::size_t flat, std::size_t base, unsigned order) {
  Digits d;
  decode(flat, base, order, d);
  std::sort(d.begin(), d.begin() + order);
  return std::adjacent_find(d.begin(), d.begin() + order) != d.begin() + order;
}

/// sum_i fn(i) prod_k m_{i_k} over all N^order flat indices. Rows of N
/// entries are accumulated in parallel and combined by pairwise_sum, so the
/// result does not depend on the number of lanes.
template <class Fn>
double weighted_reduce(unsigned order, const Partition& part, Fn&& fn) {
  if (order == 0) return fn(std::size_t{0});
  const std::size_t n = part.size();
  const std::size_t rows = tensor_size(n, order - 1);
  const double* masses = part.masses().data();
  std::vector<double> partial(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t row = 0; row < static_cast<std::ptrdiff_t>(rows); ++row) {
    double w = 1.0;
    std::size_t rest = static_cast<std::size_t>(row);
    for (unsigned k = 0; k + 1 < order; ++k) {
      w *= masses[rest % n];
      rest /= n;
    }
    const std::size_t base = static_cast<std::size_t>(row) * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += fn(base + j) * masses[j];
    partial[static_cast<std::size_t>(row)] = acc * w;
  }
  return pairwise_sum(partial);
}

}  // namespace chaoslab::detail

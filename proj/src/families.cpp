#include "chaoslab/families.hpp"

#include "chaoslab/errors.hpp"
#include "detail.hpp"

namespace chaoslab {

namespace {

double draw(Philox4x32& engine, RandomSign sign) {
  const double u = engine.uniform();
  switch (sign) {
    case RandomSign::nonnegative: return u;
    case RandomSign::nonpositive: return -u;
    default: return 2.0 * u - 1.0;
  }
}

}  // namespace

IndexFunction canonical_family_q2(std::size_t n) {
  if (n < 2) throw DomainError("canonical_family_q2: N must be at least 2");
  std::vector<double> v(n * n, 0.0);
  const double x = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) v[i * n + j] = x;
    }
  }
  return IndexFunction(2, n, std::move(v));
}

IndexFunction pair_square_family_q4(const IndexFunction& g) {
  if (g.order() != 2) throw DomainError("pair_square_family_q4: g must have order 2");
  const std::size_t n = g.size();
  std::vector<double> v(tensor_size(n, 4), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          // Every pairing of {i,j,k,l} appears 8 times among the 24 permutations.
          const double s = g[i * n + j] * g[k * n + l] + g[i * n + k] * g[j * n + l] +
                           g[i * n + l] * g[j * n + k];
          v[((i * n + j) * n + k) * n + l] = s / 3.0;
        }
      }
    }
  }
  return IndexFunction(4, n, std::move(v));
}

PiecewiseKernel random_symmetric_kernel(unsigned q, const Partition& partition, Philox4x32& engine,
                                        RandomSign sign) {
  std::vector<double> v(tensor_size(partition.size(), q));
  for (double& x : v) x = draw(engine, sign);
  return symmetrize(PiecewiseKernel(q, partition, std::move(v)));
}

IndexFunction random_index_function(unsigned q, std::size_t n, Philox4x32& engine, RandomSign sign) {
  const PiecewiseKernel sym = random_symmetric_kernel(q, Partition::unit(n), engine, sign);
  std::vector<double> v(sym.values().begin(), sym.values().end());
  if (q >= 2) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (detail::has_repeated_digit(i, n, q)) v[i] = 0.0;
    }
  }
  return IndexFunction(q, n, std::move(v));
}

Partition random_partition(std::size_t n, double lo, double hi, Philox4x32& engine) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("random_partition: need 0 < lo <= hi");
  std::vector<double> m(n);
  for (double& x : m) x = lo + (hi - lo) * engine.uniform();
  return Partition(std::move(m));
}

}  // namespace chaoslab

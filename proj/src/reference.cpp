#include "chaoslab/reference.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "detail.hpp"

namespace chaoslab::reference {

using detail::Digits;

PiecewiseKernel contract(const PiecewiseKernel& f, const PiecewiseKernel& g, unsigned r,
                         unsigned l) {
  if (!(f.partition() == g.partition())) throw ShapeError("contract: partition mismatch");
  const unsigned p = f.order();
  const unsigned q = g.order();
  if (r > std::min(p, q) || l > r) throw DomainError("contract: need l <= r <= min(p, q)");
  const std::size_t n = f.cells();
  const unsigned kept = r - l;
  const unsigned out_order = p + q - r - l;
  const std::size_t out_size = tensor_size(n, out_order);
  const std::size_t n_z = tensor_size(n, l);

  std::vector<double> out(out_size, 0.0);
  Digits o{}, z{}, fi{}, gi{};
  for (std::size_t u = 0; u < out_size; ++u) {
    detail::decode(u, n, out_order, o);
    double acc = 0.0;
    for (std::size_t zf = 0; zf < n_z; ++zf) {
      detail::decode(zf, n, l, z);
      // f(z, gamma, t) and g(z, gamma, s)
      unsigned a = 0, b = 0;
      double w = 1.0;
      for (unsigned k = 0; k < l; ++k) {
        fi[a++] = z[k];
        gi[b++] = z[k];
        w *= f.partition().mass(z[k]);
      }
      for (unsigned k = 0; k < kept; ++k) {
        fi[a++] = o[k];
        gi[b++] = o[k];
      }
      for (unsigned k = 0; k < p - r; ++k) fi[a++] = o[kept + k];
      for (unsigned k = 0; k < q - r; ++k) gi[b++] = o[kept + (p - r) + k];
      acc += f[detail::encode(fi, n, p)] * g[detail::encode(gi, n, q)] * w;
    }
    out[u] = acc;
  }
  return PiecewiseKernel(out_order, f.partition(), std::move(out));
}

PiecewiseKernel symmetrize_exhaustive(const PiecewiseKernel& f) {
  const unsigned q = f.order();
  if (q > kMaxExhaustiveOrder) {
    throw DomainError("symmetrize_exhaustive: order above " + std::to_string(kMaxExhaustiveOrder));
  }
  const std::size_t n = f.cells();
  const double norm = 1.0 / static_cast<double>(factorial(q));
  std::vector<double> out(f.size(), 0.0);
  std::vector<unsigned> perm(q);
  Digits d{}, pd{};
  for (std::size_t i = 0; i < f.size(); ++i) {
    detail::decode(i, n, q, d);
    std::iota(perm.begin(), perm.end(), 0u);
    double acc = 0.0;
    do {
      for (unsigned k = 0; k < q; ++k) pd[k] = d[perm[k]];
      acc += f[detail::encode(pd, n, q)];
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[i] = acc * norm;
  }
  return PiecewiseKernel(q, f.partition(), std::move(out));
}

double inner(const PiecewiseKernel& f, const PiecewiseKernel& g) {
  if (f.order() != g.order() || !(f.partition() == g.partition())) {
    throw ShapeError("inner: shape mismatch");
  }
  const unsigned q = f.order();
  const std::size_t n = f.cells();
  Digits d{};
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    detail::decode(i, n, q, d);
    double w = 1.0;
    for (unsigned k = 0; k < q; ++k) w *= f.partition().mass(d[k]);
    acc += f[i] * g[i] * w;
  }
  return acc;
}

}  // namespace chaoslab::reference

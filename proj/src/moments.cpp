#include "chaoslab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/reference.hpp"
#include "detail.hpp"

namespace chaoslab {

namespace {

using u64 = std::uint64_t;

double to_double(u64 v) { return static_cast<double>(v); }

/// r! C(q,r)^2 C(r,l), the weight of f ~*_r^l f in the product formula.
u64 product_coefficient(unsigned q, unsigned r, unsigned l) {
  const u64 b = binomial(q, r);
  return checked_mul(checked_mul(factorial(r), checked_mul(b, b)), binomial(r, l));
}

void require_even(unsigned q, const char* where) {
  if (q == 0 || q % 2 != 0) throw DomainError(std::string(where) + ": q must be even and >= 2");
}

PiecewiseKernel sym_contraction(const PiecewiseKernel& f, unsigned r, unsigned l) {
  return symmetrize(contract(f, f, r, l));
}

bool exceeds_threshold(std::size_t n, unsigned order) {
  u64 size = 1;
  for (unsigned k = 0; k < order; ++k) {
    if (__builtin_mul_overflow(size, static_cast<u64>(n), &size)) return true;
  }
  return size > kStructuredThreshold;
}

/// Pieces of a q = 2 kernel from which every squared norm needed by the
/// moment formulas follows without forming tensors of order 3 or 4.
///   K = f *_1^1 f (matrix), v = f *_2^1 f (vector), S = f *_2^0 f = F∘F.
class Q2Parts {
 public:
  explicit Q2Parts(const PiecewiseKernel& f) {
    const std::size_t n = f.cells();
    const double* F = f.values().data();
    const double* m = f.partition().masses().data();
    std::vector<double> fm(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t c = 0; c < n; ++c) fm[a * n + c] = F[a * n + c] * m[c];
    }
    std::vector<double> k(n * n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ai = 0; ai < static_cast<std::ptrdiff_t>(n); ++ai) {
      const std::size_t a = static_cast<std::size_t>(ai);
      const double* row_a = fm.data() + a * n;
      for (std::size_t b = 0; b < n; ++b) {
        const double* row_b = F + b * n;
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += row_a[c] * row_b[c];
        k[a * n + b] = acc;
      }
    }
    std::vector<double> v(n), s(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        const double x = F[a * n + b];
        s[a * n + b] = x * x;
        acc += x * x * m[b];
      }
      v[a] = acc;
    }
    auto part = f.shared_partition();
    K_.emplace(2, part, std::move(k));
    V_.emplace(1, part, std::move(v));
    S_.emplace(2, part, std::move(s));
    norm_sq_ = l2_norm_sq(f);
  }

  const PiecewiseKernel& K() const { return *K_; }
  const PiecewiseKernel& V() const { return *V_; }
  const PiecewiseKernel& S() const { return *S_; }

  /// ||f ~*_r^l f||^2.
  double sym_norm_sq(unsigned r, unsigned l) const {
    if (r == 0) return (2.0 * norm_sq_ * norm_sq_ + 4.0 * l2_norm_sq(K())) / 6.0;
    if (r == 1 && l == 0) {
      // Symmetrizing F(a,b)F(a,c) over its three orbit positions.
      const double s1 = l2_norm_sq(V());
      const double s2 = inner(S(), K());
      return (s1 + 2.0 * s2) / 3.0;
    }
    if (r == 1) return l2_norm_sq(K());
    if (l == 0) return l2_norm_sq(S());
    if (l == 1) return l2_norm_sq(V());
    return norm_sq_ * norm_sq_;
  }

  double g_norm_sq(unsigned p) const {
    switch (p) {
      case 0: return 4.0 * norm_sq_ * norm_sq_;
      case 1: return 16.0 * l2_norm_sq(V());
      case 2: return l2_norm_sq(lincomb(4.0, K(), 2.0, S()));
      case 3: return 16.0 * sym_norm_sq(1, 0);
      default: return sym_norm_sq(0, 0);
    }
  }

 private:
  std::optional<PiecewiseKernel> K_, V_, S_;
  double norm_sq_ = 0.0;
};

/// Squared norms of G_p and of symmetrized self-contractions, choosing the
/// structured or dense evaluation per request.
class NormSource {
 public:
  NormSource(const PiecewiseKernel& f, NormRoute route) : f_(f), route_(route) {
    if (route_ == NormRoute::structured && f.order() != 2) {
      throw DomainError("structured norm route is only available for q = 2");
    }
  }

  double g_norm_sq(unsigned p) {
    if (use_structured(p)) return parts().g_norm_sq(p);
    const PiecewiseKernel g = g_operator(f_, p);
    return l2_norm_sq(g);
  }

  double sym_norm_sq(unsigned r, unsigned l) {
    if (use_structured(2 * f_.order() - r - l)) return parts().sym_norm_sq(r, l);
    return l2_norm_sq(sym_contraction(f_, r, l));
  }

 private:
  bool use_structured(unsigned order) const {
    switch (route_) {
      case NormRoute::dense: return false;
      case NormRoute::structured: return true;
      default: return f_.order() == 2 && exceeds_threshold(f_.cells(), order);
    }
  }
  const Q2Parts& parts() {
    if (!parts_) parts_.emplace(f_);
    return *parts_;
  }

  const PiecewiseKernel& f_;
  NormRoute route_;
  std::optional<Q2Parts> parts_;
};

double fourth_from(const PiecewiseKernel& f, NormSource& src) {
  const unsigned q = f.order();
  double total = 0.0;
  for (unsigned p = 0; p <= 2 * q; ++p) total += to_double(factorial(p)) * src.g_norm_sq(p);
  return total;
}

}  // namespace

double c_constant(unsigned q) {
  require_even(q, "c_constant");
  const u64 b = binomial(q, q / 2);
  return 4.0 / to_double(checked_mul(factorial(q / 2), checked_mul(b, b)));
}

PiecewiseKernel g_operator(const PiecewiseKernel& f, unsigned p) {
  require_symmetric(f, "g_operator");
  const unsigned q = f.order();
  if (p > 2 * q) throw DomainError("g_operator: p must lie in 0..2q");
  if (p == 0) return PiecewiseKernel::scalar(to_double(factorial(q)) * l2_norm_sq(f), f.partition());
  std::optional<PiecewiseKernel> acc;
  for (unsigned r = 0; r <= q; ++r) {
    for (unsigned l = 0; l <= r; ++l) {
      if (2 * q - r - l != p) continue;
      const double c = to_double(product_coefficient(q, r, l));
      PiecewiseKernel term = sym_contraction(f, r, l);
      acc = acc ? lincomb(1.0, *acc, c, term) : lincomb(c, term, 0.0, term);
    }
  }
  return *acc;
}

double g_operator_norm_sq(const PiecewiseKernel& f, unsigned p, NormRoute route) {
  require_symmetric(f, "g_operator_norm_sq");
  if (p > 2 * f.order()) throw DomainError("g_operator_norm_sq: p must lie in 0..2q");
  NormSource src(f, route);
  return src.g_norm_sq(p);
}

double sym_contraction_norm_sq(const PiecewiseKernel& f, unsigned r, unsigned l, NormRoute route) {
  require_symmetric(f, "sym_contraction_norm_sq");
  if (r > f.order() || l > r) throw DomainError("sym_contraction_norm_sq: need l <= r <= q");
  NormSource src(f, route);
  return src.sym_norm_sq(r, l);
}

double second_moment(const PiecewiseKernel& f) {
  require_symmetric(f, "second_moment");
  return to_double(factorial(f.order())) * l2_norm_sq(f);
}

double third_moment_poisson(const PiecewiseKernel& f) {
  require_symmetric(f, "third_moment_poisson");
  const unsigned q = f.order();
  double total = 0.0;
  for (unsigned r = 0; r <= q; ++r) {
    for (unsigned l = 0; l <= r; ++l) {
      if (r + l != q) continue;
      total += to_double(product_coefficient(q, r, l)) * inner(sym_contraction(f, r, l), f);
    }
  }
  return to_double(factorial(q)) * total;
}

double third_moment_poisson_even(const PiecewiseKernel& f) {
  require_symmetric(f, "third_moment_poisson_even");
  const unsigned q = f.order();
  require_even(q, "third_moment_poisson_even");
  double total = 0.0;
  for (unsigned r = q / 2; r <= q; ++r) {
    total += to_double(product_coefficient(q, r, q - r)) * inner(sym_contraction(f, r, q - r), f);
  }
  return to_double(factorial(q)) * total;
}

double fourth_moment_poisson(const PiecewiseKernel& f) {
  require_symmetric(f, "fourth_moment_poisson");
  NormSource src(f, NormRoute::automatic);
  return fourth_from(f, src);
}

double third_moment_gaussian(const PiecewiseKernel& f) {
  require_symmetric(f, "third_moment_gaussian");
  const unsigned q = f.order();
  if (q % 2 != 0) return 0.0;
  const u64 qf = factorial(q);
  const u64 hf = factorial(q / 2);
  const double coeff = to_double(checked_mul(checked_mul(qf, qf), qf)) / to_double(checked_mul(hf, hf));
  return coeff * inner(sym_contraction(f, q / 2, q / 2), f);
}

double fourth_moment_gaussian(const PiecewiseKernel& f) {
  require_symmetric(f, "fourth_moment_gaussian");
  const unsigned q = f.order();
  NormSource src(f, NormRoute::automatic);
  double total = 0.0;
  for (unsigned r = 0; r <= q; ++r) {
    const u64 rf = factorial(r);
    const u64 b2 = checked_mul(binomial(q, r), binomial(q, r));
    const u64 coeff = checked_mul(checked_mul(checked_mul(rf, rf), checked_mul(b2, b2)),
                                  factorial(2 * q - 2 * r));
    total += to_double(coeff) * src.sym_norm_sq(r, r);
  }
  return total;
}

MomentReport moment_report(const PiecewiseKernel& f) {
  MomentReport m;
  m.q = f.order();
  m.second = second_moment(f);
  m.third = third_moment_poisson(f);
  m.fourth = fourth_moment_poisson(f);
  m.gamma_statistic = m.fourth - 12.0 * m.third;
  m.nu_hat = m.second / 2.0;
  return m;
}

double DiagnosticsReport::condition_iii_max() const {
  double m = std::max(l4, mode_middle_deviation());
  for (const auto& [key, value] : contraction_norms) m = std::max(m, value);
  return m;
}

DiagnosticsReport condition_iii_diagnostics(const PiecewiseKernel& f, TargetLaw mode) {
  require_symmetric(f, "condition_iii_diagnostics");
  const unsigned q = f.order();
  require_even(q, "condition_iii_diagnostics");
  DiagnosticsReport d;
  d.q = q;
  d.mode = mode;
  for (unsigned r = 1; r <= q; ++r) {
    for (unsigned l = 1; l <= std::min(r, q - 1); ++l) {
      if (r == q / 2 && l == q / 2) continue;
      d.contraction_norms[{r, l}] = l2_norm(contract(f, f, r, l));
    }
  }
  d.l4 = l4_norm(f);
  const PiecewiseKernel mid = sym_contraction(f, q / 2, q / 2);
  const double c = c_constant(q);
  d.middle_deviation = l2_norm(lincomb(1.0, mid, -c, f));
  d.middle_deviation_reflected = l2_norm(lincomb(1.0, mid, c, f));
  d.a_prime = a_prime(f);
  d.r_term = r_term(f);
  return d;
}

double a_prime(const PiecewiseKernel& f) {
  require_symmetric(f, "a_prime");
  const unsigned q = f.order();
  require_even(q, "a_prime");
  const unsigned h = q / 2;
  const u64 qf = factorial(q);
  const u64 qf2 = checked_mul(qf, qf);
  NormSource src(f, NormRoute::automatic);

  double total = 0.0;
  for (unsigned p = 1; p + 1 <= h; ++p) {
    // (q!)^4/(p!)^2 * 2/((q-p)!)^2 = 2 C(q,p)^2 (q!)^2
    const u64 b = binomial(q, p);
    const double first = 2.0 * to_double(checked_mul(checked_mul(b, b), qf2));
    const u64 den = checked_mul(checked_mul(factorial(p), factorial(h)), factorial(h - p));
    const double second = to_double(checked_mul(qf2, qf2)) / (2.0 * to_double(checked_mul(den, den)));
    total += (first - second) * l2_norm_sq(contract(f, f, p, p));
  }
  for (unsigned p = 1; p <= 2 * q - 1; ++p) {
    if (p == q) continue;
    total += to_double(factorial(p)) * src.g_norm_sq(p);
  }
  double third = 0.0;
  for (unsigned p = h + 1; p <= q; ++p) {
    const u64 pf = factorial(p);
    const u64 b = binomial(q, p);
    const u64 b2 = checked_mul(b, b);
    const u64 c = binomial(p, q - p);
    const u64 coeff = checked_mul(checked_mul(checked_mul(pf, pf), checked_mul(b2, b2)), checked_mul(c, c));
    third += to_double(coeff) * src.sym_norm_sq(p, q - p);
  }
  total += to_double(qf) * third;
  const PiecewiseKernel mid = sym_contraction(f, h, h);
  total += 24.0 * to_double(qf) * l2_norm_sq(lincomb(1.0 / c_constant(q), mid, -1.0, f));
  return total;
}

double r_term(const PiecewiseKernel& f) {
  require_symmetric(f, "r_term");
  const unsigned q = f.order();
  require_even(q, "r_term");
  const unsigned h = q / 2;
  const double qf = to_double(factorial(q));

  std::vector<PiecewiseKernel> k;
  std::vector<u64> w;  // p! C(q,p)^2 C(p,q-p)
  for (unsigned p = h; p <= q; ++p) {
    k.push_back(sym_contraction(f, p, q - p));
    const u64 b = binomial(q, p);
    w.push_back(checked_mul(checked_mul(factorial(p), checked_mul(b, b)), binomial(p, q - p)));
  }
  double cross = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (i == j) continue;
      cross += to_double(checked_mul(w[i], w[j])) * inner(k[i], k[j]);
    }
  }
  double single = 0.0;
  for (std::size_t i = 1; i < k.size(); ++i) single += to_double(w[i]) * inner(k[i], f);
  return qf * cross - 12.0 * qf * single;
}

std::vector<double> a_prime_lower_coefficients(unsigned q) {
  require_even(q, "a_prime_lower_coefficients");
  const unsigned h = q / 2;
  std::vector<double> out;
  for (unsigned p = 1; p + 1 <= h; ++p) {
    const double a = to_double(factorial(q - p));
    const double b = to_double(checked_mul(factorial(h), factorial(h - p)));
    out.push_back(6.0 / (a * a) - 1.0 / (2.0 * b * b));
  }
  return out;
}

TDecomposition t_decomposition(const PiecewiseKernel& f) {
  require_symmetric(f, "t_decomposition");
  const unsigned q = f.order();
  require_even(q, "t_decomposition");
  const unsigned h = q / 2;
  const u64 qf = factorial(q);
  const double qfd = to_double(qf);
  const double norm_sq = l2_norm_sq(f);
  NormSource src(f, NormRoute::automatic);

  TDecomposition t;
  t.base = 3.0 * qfd * qfd * norm_sq * norm_sq;
  for (unsigned p = 1; p < q; ++p) {
    if (p == h) continue;
    const u64 b = binomial(q, p);  // (q!)^2/(p!(q-p)!)^2 = C(q,p)^2
    t.t1 += to_double(checked_mul(checked_mul(b, b), checked_mul(qf, qf))) *
            l2_norm_sq(contract(f, f, p, p));
  }
  for (unsigned p = 1; p <= 2 * q - 1; ++p) {
    if (p == q) continue;
    t.t1 += to_double(factorial(p)) * src.g_norm_sq(p);
  }
  const u64 bh = binomial(q, h);
  t.t2 = to_double(checked_mul(checked_mul(bh, bh), checked_mul(qf, qf))) *
             l2_norm_sq(contract(f, f, h, h)) +
         qfd * src.g_norm_sq(q) -
         12.0 * qfd * to_double(checked_mul(factorial(h), checked_mul(bh, bh))) *
             inner(sym_contraction(f, h, h), f);
  for (unsigned p = h + 1; p <= q; ++p) {
    t.t3 -= 12.0 * qfd * to_double(product_coefficient(q, p, q - p)) *
            inner(sym_contraction(f, p, q - p), f);
  }
  const double fourth = fourth_from(f, src);
  t.lhs = fourth - 12.0 * third_moment_poisson(f);
  t.residual = t.lhs - (t.base + t.t1 + t.t2 + t.t3);
  return t;
}

IdentityCheck symmetrization_identity_check(const PiecewiseKernel& f) {
  require_symmetric(f, "symmetrization_identity_check");
  const unsigned q = f.order();
  if (q < 1 || 2 * q > reference::kMaxExhaustiveOrder) {
    throw GuardError("symmetrization_identity_check: needs 1 <= q <= 3");
  }
  IdentityCheck c;
  c.lhs = l2_norm_sq(reference::symmetrize_exhaustive(contract(f, f, 0, 0)));
  const double n2 = l2_norm_sq(f);
  double bracket = 2.0 * n2 * n2;
  for (unsigned p = 1; p < q; ++p) {
    const double b = to_double(binomial(q, p));
    bracket += b * b * l2_norm_sq(contract(f, f, p, p));
  }
  const double qf = to_double(factorial(q));
  c.rhs = qf * qf / to_double(factorial(2 * q)) * bracket;
  c.gap = std::abs(c.lhs - c.rhs);
  return c;
}

std::vector<InequalityCheck> contraction_inequality_checks(const PiecewiseKernel& f) {
  require_symmetric(f, "contraction_inequality_checks");
  const unsigned q = f.order();
  constexpr double kRel = 1e-12;
  std::vector<double> self(q + 1);  // ||f *_p^p f||^2
  for (unsigned p = 0; p <= q; ++p) self[p] = l2_norm_sq(contract(f, f, p, p));
  std::vector<double> sym(q + 1);
  for (unsigned r = 0; r < q; ++r) sym[r] = l2_norm_sq(sym_contraction(f, r, r));

  auto upper = [&](unsigned r) {
    const unsigned m = q - r;
    const double mf = to_double(factorial(m));
    double bracket = 2.0 * self[r];
    for (unsigned p = 1; p + 1 <= m; ++p) {
      const double b = to_double(binomial(m, p));
      bracket += b * b * self[p];
    }
    return mf * mf / to_double(factorial(2 * m)) * bracket;
  };

  std::vector<InequalityCheck> out;
  auto push = [&](std::string name, unsigned r, double lhs, double rhs, bool upper_bound) {
    const double tol = kRel * std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    const bool ok = upper_bound ? lhs <= rhs + tol : lhs >= rhs - tol;
    out.push_back({std::move(name), r, lhs, rhs, ok});
  };
  for (unsigned r = 1; r < q; ++r) push("r-contraction", r, sym[r], upper(r), true);
  if (q % 2 == 0 && q >= 2) push("q/2-contraction", q / 2, sym[q / 2], upper(q / 2), true);
  if (sign_constant(sign_class(f.values()))) {
    for (unsigned r = 0; r < q; ++r) {
      const double mf = to_double(factorial(q - r));
      push("reverse", r, sym[r], 2.0 * mf * mf / to_double(factorial(2 * q - 2 * r)) * self[r], false);
    }
  }
  return out;
}

}  // namespace chaoslab

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/kernel.hpp"

namespace chaoslab {

// Moment calculus for multiple Poisson (and Gaussian) integrals I_q(f) with
// a symmetric piecewise kernel f. All combinatorial coefficients are formed in
// exact integer arithmetic and converted to double once.

/// c_q = 4 / ((q/2)! C(q, q/2)^2), q even.
double c_constant(unsigned q);

/// Route used to evaluate squared norms of symmetrized contractions.
/// `structured` is only available for q = 2 and avoids materializing
/// tensors of order 3 and 4; `automatic` uses it once a dense tensor would
/// exceed kStructuredThreshold entries.
enum class NormRoute { automatic, dense, structured };
inline constexpr std::size_t kStructuredThreshold = std::size_t{1} << 20;

/// G_p^q f; p = 0 yields the scalar q!||f||^2.
PiecewiseKernel g_operator(const PiecewiseKernel& f, unsigned p);
double g_operator_norm_sq(const PiecewiseKernel& f, unsigned p,
                          NormRoute route = NormRoute::automatic);

/// ||f ~*_r^l f||^2.
double sym_contraction_norm_sq(const PiecewiseKernel& f, unsigned r, unsigned l,
                               NormRoute route = NormRoute::automatic);

double second_moment(const PiecewiseKernel& f);
double third_moment_poisson(const PiecewiseKernel& f);
/// Even-q form summing r = q/2..q only; must agree with third_moment_poisson.
double third_moment_poisson_even(const PiecewiseKernel& f);
double fourth_moment_poisson(const PiecewiseKernel& f);
double third_moment_gaussian(const PiecewiseKernel& f);
double fourth_moment_gaussian(const PiecewiseKernel& f);

struct MomentReport {
  unsigned q = 0;
  double second = 0;
  double third = 0;
  double fourth = 0;
  double gamma_statistic = 0;  // fourth - 12 third
  double nu_hat = 0;           // second / 2
};

MomentReport moment_report(const PiecewiseKernel& f);

enum class TargetLaw { gamma, reflected };

struct DiagnosticsReport {
  unsigned q = 0;
  TargetLaw mode = TargetLaw::gamma;
  /// ||f *_r^l f|| for r in 1..q, l in 1..min(r, q-1), without (q/2, q/2).
  std::map<std::pair<unsigned, unsigned>, double> contraction_norms;
  double l4 = 0;
  double middle_deviation = 0;            // ||f ~*_{q/2}^{q/2} f - c_q f||
  double middle_deviation_reflected = 0;  // ||f ~*_{q/2}^{q/2} f + c_q f||
  double a_prime = 0;
  double r_term = 0;

  /// The middle deviation that belongs to `mode`.
  double mode_middle_deviation() const {
    return mode == TargetLaw::gamma ? middle_deviation : middle_deviation_reflected;
  }
  /// Largest quantity that must vanish in the limit for `mode`.
  double condition_iii_max() const;
};

DiagnosticsReport condition_iii_diagnostics(const PiecewiseKernel& f,
                                            TargetLaw mode = TargetLaw::gamma);

double a_prime(const PiecewiseKernel& f);
double r_term(const PiecewiseKernel& f);

/// Coefficients 6/((q-p)!)^2 - 1/(2((q/2)!(q/2-p)!)^2), p = 1..q/2-1, that
/// bound A' from below for sign-constant kernels. Positive for q <= 4; for
/// q >= 6 some are negative and they are reported, not asserted.
std::vector<double> a_prime_lower_coefficients(unsigned q);

struct TDecomposition {
  double base = 0;  // 3 (q!)^2 ||f||^4
  double t1 = 0;
  double t2 = 0;
  double t3 = 0;
  double lhs = 0;   // fourth - 12 third
  double residual = 0;
};

TDecomposition t_decomposition(const PiecewiseKernel& f);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  double gap = 0;
};

/// ||f ~*_0^0 f||^2 by exhaustive permutation averaging against the closed
/// form (q!)^2/(2q)! (2||f||^4 + sum_p C(q,p)^2 ||f *_p^p f||^2). q <= 3.
IdentityCheck symmetrization_identity_check(const PiecewiseKernel& f);

struct InequalityCheck {
  std::string name;   // "r-contraction", "q/2-contraction" or "reverse"
  unsigned r = 0;
  double lhs = 0;
  double rhs = 0;
  bool satisfied = false;
};

/// Upper bounds on ||f ~*_r^r f||^2 for r = 1..q-1 and, when f has constant
/// sign, the reverse lower bound for r = 0..q-1.
std::vector<InequalityCheck> contraction_inequality_checks(const PiecewiseKernel& f);

}  // namespace chaoslab

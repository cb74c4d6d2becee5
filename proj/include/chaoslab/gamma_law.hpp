#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "chaoslab/rng.hpp"

namespace chaoslab {

/// Centred Gamma law Y = 2X - nu with X ~ Gamma(nu/2, 1), its reflection -Y,
/// and the two-parameter form Y = (X - a)/lambda with X ~ Gamma(a, 1).
class GammaLaw {
 public:
  static GammaLaw centred(double nu);
  static GammaLaw reflected(double nu);
  /// Density lambda^a/Gamma(a) (x + a/lambda)^(a-1) exp(-(lambda x + a)).
  static GammaLaw two_parameter(double shape, double rate, bool reflect = false);

  double shape() const noexcept { return shape_; }
  double rate() const noexcept { return rate_; }
  bool is_reflected() const noexcept { return reflected_; }
  /// nu = 2 * shape for the one-parameter family.
  bool one_parameter() const noexcept { return rate_ == 0.5; }
  double nu() const noexcept { return 2.0 * shape_; }

  /// Lower (upper when reflected) end of the support: -a/lambda.
  double support_edge() const noexcept;

  double density(double x) const;
  /// Density at distance s >= 0 inside the support edge; exact near the
  /// edge, where density(x) loses digits to cancellation.
  double density_from_edge(double s) const;
  double cdf(double x) const;
  /// (E[Y], E[Y^2], E[Y^3], E[Y^4]).
  std::array<double, 4> moments() const;
  /// int x^k density(x) dx for k = 0..4 by tanh-sinh / exp-sinh quadrature.
  std::array<double, 5> quadrature_moments() const;

  double sample(Philox4x32& engine) const;
  /// Draw i comes from stream (seed, tag, i).
  std::vector<double> sample(std::uint64_t seed, std::uint32_t tag, std::size_t count) const;

 private:
  GammaLaw(double shape, double rate, bool reflected);
  double shape_;
  double rate_;
  bool reflected_;
};

}  // namespace chaoslab

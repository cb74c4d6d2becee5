#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chaoslab/gamma_law.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

/// Independent centred unit-variance sequence X_1, X_2, ...
class SequenceSpec {
 public:
  struct PoissonNormalized {
    std::vector<double> lambdas;  // X_i = (Po(l_i) - l_i) / sqrt(l_i)
  };
  struct Gaussian {};
  struct Rademacher {};
  struct Custom {
    std::function<double(Philox4x32&)> sampler;
    std::optional<std::vector<double>> raw_moments;  // E[X^1..X^k]
  };

  static SequenceSpec poisson(std::vector<double> lambdas);
  static SequenceSpec poisson_uniform(std::size_t n, double lambda);
  static SequenceSpec gaussian();
  static SequenceSpec rademacher();
  static SequenceSpec custom(std::function<double(Philox4x32&)> sampler,
                             std::optional<std::vector<double>> raw_moments = std::nullopt);

  std::string name() const;
  bool is_poisson() const { return std::holds_alternative<PoissonNormalized>(kind_); }
  /// Poisson intensities; empty for other kinds.
  std::span<const double> lambdas() const;
  /// Number of variables the spec can supply (unbounded for i.i.d. kinds).
  std::size_t capacity() const;

  double sample(std::size_t index, Philox4x32& engine) const;

  const auto& kind() const { return kind_; }

 private:
  using Kind = std::variant<PoissonNormalized, Gaussian, Rademacher, Custom>;
  explicit SequenceSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// E[X_index^k] for k = 1..up_to (up_to <= 8).
std::vector<double> raw_moments(const SequenceSpec& spec, std::size_t index, unsigned up_to);

std::vector<double> sample_sequence(const SequenceSpec& spec, std::size_t n, Philox4x32& engine);

/// Q_q(N, h, x) by order lowering: contract h against x one slot at a time.
double homogeneous_sum(const IndexFunction& h, std::span<const double> x);
/// Literal sum over all N^q tuples; the test reference.
double homogeneous_sum_naive(const IndexFunction& h, std::span<const double> x);

struct McResult {
  std::size_t draws = 0;
  std::array<double, 4> moment{};        // sample means of Q^k, k = 1..4
  std::array<double, 4> standard_error{};
  std::vector<double> samples;           // filled when requested
  std::string stream;                    // derived stream identifier
};

/// M independent draws of Q_q(N, h, X). Draw d uses stream (seed, tag, d).
McResult mc_moments(const IndexFunction& h, const SequenceSpec& spec, std::size_t draws,
                    std::uint64_t seed, bool keep_samples = false,
                    std::uint32_t tag = stream_tag("mc_moments"));

/// Enumeration guard for exact_moments_small.
inline constexpr std::uint64_t kOracleTupleCap = 10'000'000;

/// E[Q_q(N, h, X)^k] by enumerating all k-tuples of index tuples and
/// multiplying per-variable raw moments. k <= 4.
double exact_moments_small(const IndexFunction& h, const SequenceSpec& spec, unsigned k);

/// Right-continuous empirical distribution function.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> sample);
  double operator()(double x) const;
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

Ecdf ecdf(std::vector<double> sample);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_distance(std::span<const double> sample, const GammaLaw& law);

/// Mean and standard error of (values) with a fixed reduction order.
struct MeanEstimate {
  double mean = 0;
  double standard_error = 0;
};
MeanEstimate mean_estimate(std::span<const double> values);

}  // namespace chaoslab

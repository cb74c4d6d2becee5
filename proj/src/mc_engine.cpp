#include "chaoslab/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/parallel.hpp"

namespace chaoslab {

SequenceSpec SequenceSpec::poisson(std::vector<double> lambdas) {
  if (lambdas.empty()) throw DomainError("poisson sequence: at least one intensity required");
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("poisson sequence: intensities must be positive");
  }
  return SequenceSpec(PoissonNormalized{std::move(lambdas)});
}

SequenceSpec SequenceSpec::poisson_uniform(std::size_t n, double lambda) {
  return poisson(std::vector<double>(n, lambda));
}

SequenceSpec SequenceSpec::gaussian() { return SequenceSpec(Gaussian{}); }
SequenceSpec SequenceSpec::rademacher() { return SequenceSpec(Rademacher{}); }

SequenceSpec SequenceSpec::custom(std::function<double(Philox4x32&)> sampler,
                                  std::optional<std::vector<double>> raw_moments) {
  if (!sampler) throw DomainError("custom sequence: sampler required");
  return SequenceSpec(Custom{std::move(sampler), std::move(raw_moments)});
}

std::string SequenceSpec::name() const {
  switch (kind_.index()) {
    case 0: return "poisson";
    case 1: return "gaussian";
    case 2: return "rademacher";
    default: return "custom";
  }
}

std::span<const double> SequenceSpec::lambdas() const {
  if (const auto* p = std::get_if<PoissonNormalized>(&kind_)) return p->lambdas;
  return {};
}

std::size_t SequenceSpec::capacity() const {
  if (const auto* p = std::get_if<PoissonNormalized>(&kind_)) return p->lambdas.size();
  return std::numeric_limits<std::size_t>::max();
}

double SequenceSpec::sample(std::size_t index, Philox4x32& engine) const {
  if (index >= capacity()) throw ShapeError("sequence index beyond the listed intensities");
  if (const auto* p = std::get_if<PoissonNormalized>(&kind_)) {
    const double lambda = p->lambdas[index];
    std::poisson_distribution<long long> dist(lambda);
    return (static_cast<double>(dist(engine)) - lambda) / std::sqrt(lambda);
  }
  if (std::holds_alternative<Gaussian>(kind_)) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(engine);
  }
  if (std::holds_alternative<Rademacher>(kind_)) return (engine() & 1u) ? 1.0 : -1.0;
  return std::get<Custom>(kind_).sampler(engine);
}

namespace {

/// E[X^1..X^up_to] without the public order cap.
std::vector<double> raw_moments_any(const SequenceSpec& spec, std::size_t index, unsigned up_to) {
  std::vector<double> m(up_to + 1, 0.0);
  m[0] = 1.0;
  const auto& kind = spec.kind();
  if (const auto* p = std::get_if<SequenceSpec::PoissonNormalized>(&kind)) {
    if (index >= p->lambdas.size()) throw ShapeError("raw_moments: index beyond intensities");
    const double lambda = p->lambdas[index];
    // Cumulants of (Po(l) - l)/sqrt(l): 0, 1, l^(-1/2), l^(-1), ...
    std::vector<double> kappa(up_to + 1, 0.0);
    for (unsigned k = 2; k <= up_to; ++k) kappa[k] = std::pow(lambda, 1.0 - k / 2.0);
    for (unsigned n = 1; n <= up_to; ++n) {
      double acc = 0.0;
      for (unsigned k = 1; k <= n; ++k) acc += static_cast<double>(binomial(n - 1, k - 1)) * kappa[k] * m[n - k];
      m[n] = acc;
    }
  } else if (std::holds_alternative<SequenceSpec::Gaussian>(kind)) {
    for (unsigned n = 2; n <= up_to; n += 2) m[n] = m[n - 2] * (n - 1);
  } else if (std::holds_alternative<SequenceSpec::Rademacher>(kind)) {
    for (unsigned n = 2; n <= up_to; n += 2) m[n] = 1.0;
  } else {
    const auto& table = std::get<SequenceSpec::Custom>(kind).raw_moments;
    if (!table || table->size() < up_to) throw DomainError("raw_moments: custom sequence lacks a moment table");
    for (unsigned n = 1; n <= up_to; ++n) m[n] = (*table)[n - 1];
  }
  return m;
}

}  // namespace

std::vector<double> raw_moments(const SequenceSpec& spec, std::size_t index, unsigned up_to) {
  if (up_to > 8) throw DomainError("raw_moments: up_to must be at most 8");
  auto m = raw_moments_any(spec, index, up_to);
  m.erase(m.begin());
  return m;
}

std::vector<double> sample_sequence(const SequenceSpec& spec, std::size_t n, Philox4x32& engine) {
  if (n > spec.capacity()) throw ShapeError("sample_sequence: more variables than intensities");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = spec.sample(i, engine);
  return x;
}

double homogeneous_sum(const IndexFunction& h, std::span<const double> x) {
  const std::size_t n = h.size();
  if (x.size() < n) throw ShapeError("homogeneous_sum: too few variables");
  std::vector<double> cur(h.values().begin(), h.values().end());
  for (unsigned k = h.order(); k > 0; --k) {
    std::vector<double> next(cur.size() / n);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double* row = cur.data() + i * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
      next[i] = acc;
    }
    cur.swap(next);
  }
  return cur[0];
}

double homogeneous_sum_naive(const IndexFunction& h, std::span<const double> x) {
  const std::size_t n = h.size();
  const unsigned q = h.order();
  if (x.size() < n) throw ShapeError("homogeneous_sum_naive: too few variables");
  double acc = 0.0;
  for (std::size_t flat = 0; flat < h.values().size(); ++flat) {
    std::size_t rest = flat;
    double prod = h[flat];
    for (unsigned k = 0; k < q; ++k) {
      prod *= x[rest % n];
      rest /= n;
    }
    acc += prod;
  }
  return acc;
}

MeanEstimate mean_estimate(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean_estimate: empty sample");
  const double m = static_cast<double>(values.size());
  MeanEstimate e;
  e.mean = pairwise_sum(values) / m;
  if (values.size() > 1) {
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = (values[i] - e.mean) * (values[i] - e.mean);
    e.standard_error = std::sqrt(pairwise_sum(dev) / (m - 1.0) / m);
  }
  return e;
}

McResult mc_moments(const IndexFunction& h, const SequenceSpec& spec, std::size_t draws,
                    std::uint64_t seed, bool keep_samples, std::uint32_t tag) {
  if (draws == 0) throw DomainError("mc_moments: at least one draw required");
  const std::size_t n = h.size();
  if (n > spec.capacity()) throw ShapeError("mc_moments: sequence shorter than the index function");
  std::vector<double> q(draws);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(draws); ++d) {
    Philox4x32 engine(seed, tag, static_cast<std::uint64_t>(d));
    const auto x = sample_sequence(spec, n, engine);
    q[static_cast<std::size_t>(d)] = homogeneous_sum(h, x);
  }
  McResult r;
  r.draws = draws;
  std::vector<double> power(draws);
  for (int k = 0; k < 4; ++k) {
    for (std::size_t d = 0; d < draws; ++d) power[d] = std::pow(q[d], k + 1);
    const auto e = mean_estimate(power);
    r.moment[static_cast<std::size_t>(k)] = e.mean;
    r.standard_error[static_cast<std::size_t>(k)] = e.standard_error;
  }
  r.stream = describe_stream(seed, tag, 0, draws);
  if (keep_samples) r.samples = std::move(q);
  return r;
}

double exact_moments_small(const IndexFunction& h, const SequenceSpec& spec, unsigned k) {
  if (k < 1 || k > 4) throw DomainError("exact_moments_small: k must lie in 1..4");
  const std::size_t n = h.size();
  const unsigned q = h.order();
  std::uint64_t tuples = 1;
  for (unsigned i = 0; i < q * k; ++i) {
    if (__builtin_mul_overflow(tuples, static_cast<std::uint64_t>(n), &tuples) || tuples > kOracleTupleCap) {
      throw GuardError("exact_moments_small: enumeration exceeds the tuple guard");
    }
  }
  if (n > spec.capacity()) throw ShapeError("exact_moments_small: sequence shorter than the index function");
  std::vector<std::vector<double>> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = raw_moments_any(spec, i, q * k);

  // Depth-first over the k index tuples; multiplicities of every index are
  // tracked so the expectation factorizes into per-variable raw moments.
  std::vector<unsigned> count(n, 0);
  const std::size_t entries = h.values().size();
  double total = 0.0;
  auto recurse = [&](auto&& self, unsigned block, double weight) -> void {
    if (block == k) {
      double e = weight;
      for (std::size_t i = 0; i < n && e != 0.0; ++i) e *= raw[i][count[i]];
      total += e;
      return;
    }
    for (std::size_t flat = 0; flat < entries; ++flat) {
      const double v = h[flat];
      if (v == 0.0) continue;
      std::size_t rest = flat;
      for (unsigned s = 0; s < q; ++s) {
        ++count[rest % n];
        rest /= n;
      }
      self(self, block + 1, weight * v);
      rest = flat;
      for (unsigned s = 0; s < q; ++s) {
        --count[rest % n];
        rest /= n;
      }
    }
  };
  recurse(recurse, 0, 1.0);
  return total;
}

Ecdf::Ecdf(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw DomainError("ecdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Ecdf ecdf(std::vector<double> sample) { return Ecdf(std::move(sample)); }

double ks_distance(std::span<const double> sample, const GammaLaw& law) {
  if (sample.empty()) throw DomainError("ks_distance: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = law.cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

}  // namespace chaoslab

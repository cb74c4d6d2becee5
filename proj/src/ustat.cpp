#include "chaoslab/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/mc_engine.hpp"
#include "chaoslab/parallel.hpp"

namespace chaoslab {

namespace {

bool symmetric_tensor(std::span<const double> v, std::size_t base, unsigned order) {
  if (order <= 1) return true;
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * scale;
  std::vector<std::size_t> d(order);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t rest = i;
    for (unsigned k = order; k-- > 0;) {
      d[k] = rest % base;
      rest /= base;
    }
    std::sort(d.begin(), d.end());
    std::size_t rep = 0;
    for (unsigned k = 0; k < order; ++k) rep = rep * base + d[k];
    if (std::abs(v[i] - v[rep]) > tol) return false;
  }
  return true;
}

/// Cumulative cell weights for inverse-transform cell sampling.
class CellSampler {
 public:
  explicit CellSampler(std::span<const double> weights) : cum_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cum_.begin());
  }
  std::size_t operator()(Philox4x32& engine) const {
    const double u = engine.uniform() * cum_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    return std::min(static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1);
  }

 private:
  std::vector<double> cum_;
};

double choose(std::uint64_t n, unsigned k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (unsigned i = 0; i < k; ++i) out = out * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return out;
}

std::uint64_t poisson_count(double n, Philox4x32& engine) {
  std::poisson_distribution<std::int64_t> dist(n);
  return static_cast<std::uint64_t>(dist(engine));
}

}  // namespace

GridKernel::GridKernel(unsigned order, unsigned dim, std::size_t grid, std::vector<double> values)
    : GridKernel(order, dim, grid, std::move(values), {}) {}

GridKernel::GridKernel(unsigned order, unsigned dim, std::size_t grid, std::vector<double> values,
                       std::vector<double> weights)
    : order_(order), dim_(dim), grid_(grid), values_(std::move(values)), weights_(std::move(weights)) {
  if (order_ < 1 || dim_ < 1 || grid_ < 1) throw DomainError("GridKernel: order, dim and grid must be positive");
  const std::size_t cells = tensor_size(grid_, dim_);
  if (weights_.empty()) weights_.assign(cells, 1.0 / static_cast<double>(cells));
  if (weights_.size() != cells) throw ShapeError("GridKernel: weight count must be g^d");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("GridKernel: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("GridKernel: weights must sum to 1");
  if (values_.size() != tensor_size(cells, order_)) throw ShapeError("GridKernel: value count must be (g^d)^q");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("GridKernel: values must be finite");
  }
  if (!symmetric_tensor(values_, cells, order_)) throw DomainError("GridKernel: values are not symmetric");
}

GridKernel GridKernel::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return GridKernel(order_, dim_, grid_, std::move(v), weights_);
}

double degeneracy_defect(const GridKernel& k) {
  const std::size_t c = k.cells();
  const std::size_t rest = k.values().size() / c;
  const auto v = k.values();
  const auto p = k.weights();
  double worst = 0.0;
  for (std::size_t r = 0; r < rest; ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += v[j * rest + r] * p[j];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

GridKernel project_degenerate(const GridKernel& k) {
  if (degeneracy_defect(k) < 1e-12) return k;
  const std::size_t c = k.cells();
  const unsigned q = k.order();
  const auto p = k.weights();
  std::vector<double> v(k.values().begin(), k.values().end());
  for (int pass = 0; pass < 8; ++pass) {
    // Subtract the p-weighted mean over slot s, for every slot in turn.
    std::size_t inner = 1;
    for (unsigned s = 0; s < q; ++s) {
      const std::size_t outer = v.size() / (inner * c);
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) {
          double mean = 0.0;
          for (std::size_t j = 0; j < c; ++j) mean += v[(o * c + j) * inner + i] * p[j];
          for (std::size_t j = 0; j < c; ++j) v[(o * c + j) * inner + i] -= mean;
        }
      }
      inner *= c;
    }
    GridKernel out(q, k.dim(), k.grid(), v, std::vector<double>(p.begin(), p.end()));
    if (degeneracy_defect(out) < 1e-12) return out;
  }
  throw GuardError("project_degenerate: centering did not converge");
}

PiecewiseKernel to_piecewise_kernel(const GridKernel& k, double n) {
  if (!(n > 0.0)) throw DomainError("to_piecewise_kernel: intensity must be positive");
  std::vector<double> masses(k.weights().begin(), k.weights().end());
  for (double& m : masses) m *= n;
  const double inv = 1.0 / static_cast<double>(factorial(k.order()));
  std::vector<double> v(k.values().begin(), k.values().end());
  for (double& x : v) x *= inv;
  return PiecewiseKernel(k.order(), Partition(std::move(masses)), std::move(v));
}

GridKernel signed_lift(const IndexFunction& h, double n) {
  if (!(n > 0.0)) throw DomainError("signed_lift: intensity must be positive");
  const unsigned q = h.order();
  const std::size_t big = h.size();
  const std::size_t cells = 2 * big;
  const double mu = n / static_cast<double>(cells);
  const double scale = static_cast<double>(factorial(q)) / std::pow(2.0 * mu, q / 2.0);
  std::vector<double> values(tensor_size(cells, q));
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    std::size_t rest = flat, super = 0, mul = 1;
    double sign = 1.0;
    for (unsigned s = 0; s < q; ++s) {
      const std::size_t a = rest % cells;
      rest /= cells;
      if (a % 2 == 1) sign = -sign;
      super += (a / 2) * mul;
      mul *= big;
    }
    values[flat] = scale * sign * h[super];
  }
  return GridKernel(q, 1, cells, std::move(values));
}

double ustat_from_counts(const GridKernel& k, std::span<const std::uint64_t> counts) {
  const std::size_t c = k.cells();
  const unsigned q = k.order();
  if (counts.size() != c) throw ShapeError("ustat_from_counts: one count per cell required");
  const auto v = k.values();
  std::vector<std::size_t> occupied;
  for (std::size_t i = 0; i < c; ++i) {
    if (counts[i] > 0) occupied.push_back(i);
  }
  // Non-decreasing cell tuples over occupied cells; `mult` counts how often
  // the current cell repeats.
  double total = 0.0;
  auto recurse = [&](auto&& self, unsigned slot, std::size_t from, std::size_t flat, double weight,
                     std::size_t last, unsigned mult) -> void {
    if (slot == q) {
      total += v[flat] * weight * choose(counts[last], mult);
      return;
    }
    for (std::size_t t = from; t < occupied.size(); ++t) {
      const std::size_t cell = occupied[t];
      if (slot > 0 && cell == last) {
        if (mult + 1 > counts[cell]) continue;
        self(self, slot + 1, t, flat * c + cell, weight, cell, mult + 1);
      } else {
        const double w = slot > 0 ? weight * choose(counts[last], mult) : weight;
        self(self, slot + 1, t, flat * c + cell, w, cell, 1);
      }
    }
  };
  recurse(recurse, 0, 0, 0, 1.0, 0, 0);
  return total;
}

double ustat_naive(const GridKernel& k, std::span<const std::size_t> point_cells) {
  const unsigned q = k.order();
  const std::size_t m = point_cells.size();
  const std::size_t cap = q == 2 ? 3000 : (q == 4 ? 120 : 200);
  if (m > cap) throw GuardError("ustat_naive: too many points for increasing-tuple enumeration");
  const std::size_t c = k.cells();
  for (std::size_t cell : point_cells) {
    if (cell >= c) throw ShapeError("ustat_naive: cell index out of range");
  }
  if (m < q) return 0.0;
  const auto v = k.values();
  std::vector<std::size_t> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  double total = 0.0;
  while (true) {
    std::size_t flat = 0;
    for (unsigned s = 0; s < q; ++s) flat = flat * c + point_cells[idx[s]];
    total += v[flat];
    int s = static_cast<int>(q) - 1;
    while (s >= 0 && idx[static_cast<std::size_t>(s)] == m - q + static_cast<std::size_t>(s)) --s;
    if (s < 0) break;
    ++idx[static_cast<std::size_t>(s)];
    for (unsigned t = static_cast<unsigned>(s) + 1; t < q; ++t) idx[t] = idx[t - 1] + 1;
  }
  return total;
}

std::size_t sample_cell(const GridKernel& k, Philox4x32& engine) {
  return CellSampler(k.weights())(engine);
}

double sample_poisson_ustat(const GridKernel& k, double n, Philox4x32& engine) {
  if (!(n >= k.order())) throw DomainError("sample_poisson_ustat: need n >= q");
  const std::uint64_t count = poisson_count(n, engine);
  const CellSampler sampler(k.weights());
  std::vector<std::uint64_t> counts(k.cells(), 0);
  for (std::uint64_t i = 0; i < count; ++i) ++counts[sampler(engine)];
  return ustat_from_counts(k, counts);
}

double sample_classical_ustat(const GridKernel& k, std::size_t n, Philox4x32& engine) {
  if (n < k.order()) throw DomainError("sample_classical_ustat: need n >= q");
  const CellSampler sampler(k.weights());
  std::vector<std::uint64_t> counts(k.cells(), 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[sampler(engine)];
  return ustat_from_counts(k, counts);
}

CoupledDraw coupled_draw(const GridKernel& k, std::size_t n, Philox4x32& engine) {
  if (n < k.order()) throw DomainError("coupled_draw: need n >= q");
  CoupledDraw d;
  d.poisson_count = poisson_count(static_cast<double>(n), engine);
  const CellSampler sampler(k.weights());
  std::vector<std::uint64_t> counts(k.cells(), 0);
  const std::uint64_t total = std::max<std::uint64_t>(n, d.poisson_count);
  const std::uint64_t first = std::min<std::uint64_t>(n, d.poisson_count);
  for (std::uint64_t i = 0; i < first; ++i) ++counts[sampler(engine)];
  const double shared = ustat_from_counts(k, counts);
  for (std::uint64_t i = first; i < total; ++i) ++counts[sampler(engine)];
  const double longer = (total == first) ? shared : ustat_from_counts(k, counts);
  if (d.poisson_count >= n) {
    d.classical = shared;
    d.poisson = longer;
  } else {
    d.poisson = shared;
    d.classical = longer;
  }
  return d;
}

GapEstimate coupled_gap(const GridKernel& k, std::size_t n, std::size_t draws, std::uint64_t seed,
                        std::uint32_t tag) {
  if (draws == 0) throw DomainError("coupled_gap: at least one draw required");
  if (n < k.order()) throw DomainError("coupled_gap: need n >= q");
  std::vector<double> sq(draws);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(draws); ++d) {
    Philox4x32 engine(seed, tag, static_cast<std::uint64_t>(d));
    const CoupledDraw c = coupled_draw(k, n, engine);
    sq[static_cast<std::size_t>(d)] = (c.poisson - c.classical) * (c.poisson - c.classical);
  }
  const MeanEstimate e = mean_estimate(sq);
  return {e.mean, e.standard_error, describe_stream(seed, tag, 0, draws)};
}

GammaConditionEstimate gamma_condition_estimate(const GridKernel& k, std::size_t n, std::size_t draws,
                                                std::uint64_t seed, std::uint32_t tag) {
  if (draws == 0) throw DomainError("gamma_condition_estimate: at least one draw required");
  if (n < k.order()) throw DomainError("gamma_condition_estimate: need n >= q");
  std::vector<double> u(draws);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(draws); ++d) {
    Philox4x32 engine(seed, tag, static_cast<std::uint64_t>(d));
    u[static_cast<std::size_t>(d)] = sample_poisson_ustat(k, static_cast<double>(n), engine);
  }
  GammaConditionEstimate g;
  std::vector<double> tmp(draws);
  auto moment = [&](int power, double& m, double& se) {
    for (std::size_t d = 0; d < draws; ++d) tmp[d] = std::pow(u[d], power);
    const MeanEstimate e = mean_estimate(tmp);
    m = e.mean;
    se = e.standard_error;
  };
  moment(1, g.m1, g.se1);
  moment(2, g.m2, g.se2);
  moment(3, g.m3, g.se3);
  moment(4, g.m4, g.se4);
  for (std::size_t d = 0; d < draws; ++d) {
    const double x3 = u[d] * u[d] * u[d];
    tmp[d] = x3 * u[d] - 12.0 * x3;
  }
  const MeanEstimate s = mean_estimate(tmp);
  g.statistic = g.m4 - 12.0 * g.m3;
  g.statistic_se = s.standard_error;
  g.stream = describe_stream(seed, tag, 0, draws);
  return g;
}

double moment_ratio(const GridKernel& k, double n) {
  if (!(n > 0.0)) throw DomainError("moment_ratio: intensity must be positive");
  std::vector<double> masses(k.weights().begin(), k.weights().end());
  for (double& m : masses) m *= n;
  const PiecewiseKernel f(k.order(), Partition(std::move(masses)),
                          std::vector<double>(k.values().begin(), k.values().end()));
  const double l2 = l2_norm_sq(f);
  if (l2 == 0.0) return 0.0;
  const double l4 = l4_norm(f);
  return (l4 * l4 * l4 * l4) / (l2 * l2);
}

void write_grid_kernel(std::ostream& out, const GridKernel& k) {
  out << std::setprecision(17);
  out << k.order() << ' ' << k.dim() << ' ' << k.grid() << '\n';
  const auto w = k.weights();
  for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << w[i];
  out << '\n';
  for (double v : k.values()) out << v << '\n';
  if (!out) throw ConfigError("write_grid_kernel: stream error");
}

GridKernel read_grid_kernel(std::istream& in) {
  long long q = -1, d = -1, g = -1;
  if (!(in >> q >> d >> g) || q < 1 || d < 1 || g < 1) throw ConfigError("read_grid_kernel: bad header");
  const std::size_t cells = tensor_size(static_cast<std::size_t>(g), static_cast<unsigned>(d));
  std::vector<double> w(cells);
  for (auto& x : w) {
    if (!(in >> x)) throw ConfigError("read_grid_kernel: truncated weights line");
  }
  std::vector<double> v(tensor_size(cells, static_cast<unsigned>(q)));
  for (auto& x : v) {
    if (!(in >> x)) throw ConfigError("read_grid_kernel: truncated value block");
  }
  return GridKernel(static_cast<unsigned>(q), static_cast<unsigned>(d), static_cast<std::size_t>(g),
                    std::move(v), std::move(w));
}

}  // namespace chaoslab

#include "chaoslab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "chaoslab/combinatorics.hpp"
#include "detail.hpp"

namespace chaoslab {

using detail::Digits;

Partition::Partition(std::vector<double> masses)
    : Partition(masses, masses.empty() ? 0.0
                                       : 0.5 * *std::min_element(masses.begin(), masses.end())) {}

Partition::Partition(std::vector<double> masses, double alpha)
    : masses_(std::move(masses)), alpha_(alpha) {
  if (masses_.empty()) throw DomainError("Partition: at least one cell required");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw DomainError("Partition: alpha must be a positive real");
  }
  for (double m : masses_) {
    if (!std::isfinite(m) || !(m > alpha_)) {
      throw DomainError("Partition: every mass must be finite and exceed alpha");
    }
  }
}

Partition Partition::unit(std::size_t cells) {
  return Partition(std::vector<double>(cells, 1.0), 0.5);
}

std::size_t tensor_size(std::size_t cells, unsigned order) {
  const std::uint64_t size = checked_pow(cells, order);
  if (size > kDenseEntryCap) {
    throw GuardError("dense tensor of " + std::to_string(cells) + "^" + std::to_string(order) +
                     " entries exceeds the size guard");
  }
  return static_cast<std::size_t>(size);
}

namespace {

void check_values(unsigned order, const Partition& part, const std::vector<double>& values) {
  if (order > detail::kMaxDigits) throw DomainError("kernel order too large");
  if (values.size() != tensor_size(part.size(), order)) {
    throw ShapeError("kernel value count does not match N^q");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("kernel values must be finite");
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool symmetric_values(std::span<const double> values, std::size_t base, unsigned order,
                      double rel_tol) {
  if (order <= 1) return true;
  const double tol = rel_tol * max_abs(values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t rep = detail::orbit_representative(i, base, order);
    if (std::abs(values[i] - values[rep]) > tol) return false;
  }
  return true;
}

void require_same_shape(const PiecewiseKernel& f, const PiecewiseKernel& g, const char* where) {
  if (f.order() != g.order()) throw ShapeError(std::string(where) + ": order mismatch");
  if (!(f.partition() == g.partition())) {
    throw ShapeError(std::string(where) + ": partition mismatch");
  }
}

}  // namespace

PiecewiseKernel::PiecewiseKernel(unsigned order, Partition partition, std::vector<double> values)
    : PiecewiseKernel(order, std::make_shared<const Partition>(std::move(partition)),
                      std::move(values)) {}

PiecewiseKernel::PiecewiseKernel(unsigned order, std::shared_ptr<const Partition> partition,
                                 std::vector<double> values)
    : order_(order), partition_(std::move(partition)), values_(std::move(values)) {
  if (!partition_) throw DomainError("PiecewiseKernel: null partition");
  check_values(order_, *partition_, values_);
}

PiecewiseKernel PiecewiseKernel::zeros(unsigned order, const Partition& partition) {
  return PiecewiseKernel(order, partition,
                         std::vector<double>(tensor_size(partition.size(), order), 0.0));
}

PiecewiseKernel PiecewiseKernel::scalar(double value, const Partition& partition) {
  return PiecewiseKernel(0, partition, std::vector<double>{value});
}

double PiecewiseKernel::at(std::span<const std::size_t> index) const {
  if (index.size() != order_) throw ShapeError("PiecewiseKernel::at: wrong index length");
  std::size_t flat = 0;
  for (std::size_t k : index) {
    if (k >= cells()) throw ShapeError("PiecewiseKernel::at: index out of range");
    flat = flat * cells() + k;
  }
  return values_[flat];
}

bool PiecewiseKernel::is_symmetric(double rel_tol) const {
  return symmetric_values(values_, cells(), order_, rel_tol);
}

IndexFunction::IndexFunction(unsigned order, std::size_t size, std::vector<double> values)
    : order_(order), size_(size), values_(std::move(values)) {
  if (size_ == 0) throw DomainError("IndexFunction: size must be positive");
  if (order_ > detail::kMaxDigits) throw DomainError("IndexFunction: order too large");
  if (values_.size() != tensor_size(size_, order_)) {
    throw ShapeError("IndexFunction: value count does not match N^q");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("IndexFunction: values must be finite");
  }
  if (!symmetric_values(values_, size_, order_, 1e-12)) {
    throw DomainError("IndexFunction: values are not symmetric");
  }
  if (order_ >= 2) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] != 0.0 && detail::has_repeated_digit(i, size_, order_)) {
        throw DomainError("IndexFunction: values must vanish on diagonals");
      }
    }
  }
}

double IndexFunction::at(std::span<const std::size_t> index) const {
  if (index.size() != order_) throw ShapeError("IndexFunction::at: wrong index length");
  std::size_t flat = 0;
  for (std::size_t k : index) {
    if (k >= size_) throw ShapeError("IndexFunction::at: index out of range");
    flat = flat * size_ + k;
  }
  return values_[flat];
}

double IndexFunction::norm() const {
  std::vector<double> sq(values_.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = values_[i] * values_[i];
  return std::sqrt(pairwise_sum(sq));
}

SignClass sign_class(std::span<const double> values) {
  constexpr double kTol = 1e-14;
  double lo = 0.0, hi = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool nonneg = lo >= -kTol;
  const bool nonpos = hi <= kTol;
  if (nonneg && nonpos) return SignClass::zero;
  if (nonneg) return SignClass::nonnegative;
  if (nonpos) return SignClass::nonpositive;
  return SignClass::mixed;
}

PiecewiseKernel from_index_function(const IndexFunction& h, const Partition& partition) {
  if (h.size() != partition.size()) {
    throw ShapeError("from_index_function: index function size differs from partition size");
  }
  const unsigned q = h.order();
  const std::size_t n = h.size();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(partition.mass(i));
  std::vector<double> values(h.values().size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(values.size()); ++i) {
    Digits d;
    detail::decode(static_cast<std::size_t>(i), n, q, d);
    double scale = 1.0;
    for (unsigned k = 0; k < q; ++k) scale *= inv_sqrt[d[k]];
    values[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(i)] * scale;
  }
  return PiecewiseKernel(q, partition, std::move(values));
}

PiecewiseKernel contract(const PiecewiseKernel& f, const PiecewiseKernel& g, unsigned r,
                         unsigned l) {
  if (!(f.partition() == g.partition())) throw ShapeError("contract: partition mismatch");
  const unsigned p = f.order();
  const unsigned q = g.order();
  if (r > std::min(p, q)) throw DomainError("contract: r exceeds min(p, q)");
  if (l > r) throw DomainError("contract: l exceeds r");

  const std::size_t n = f.cells();
  const unsigned kept = r - l;  // identified, not integrated
  const unsigned tf = p - r;    // free slots of f
  const unsigned sg = q - r;    // free slots of g
  const unsigned out_order = p + q - r - l;
  const std::size_t out_size = tensor_size(n, out_order);

  // f flat = z * N^(p-l) + (gamma, t); g flat = z * N^(q-l) + (gamma, s).
  const std::size_t stride_f = tensor_size(n, p - l);
  const std::size_t stride_g = tensor_size(n, q - l);
  const std::size_t n_t = tensor_size(n, tf);
  const std::size_t n_s = tensor_size(n, sg);
  const std::size_t n_z = tensor_size(n, l);
  (void)kept;

  std::vector<double> z_weight(n_z, 1.0);
  for (std::size_t z = 0; z < n_z; ++z) {
    std::size_t rest = z;
    double w = 1.0;
    for (unsigned k = 0; k < l; ++k) {
      w *= f.partition().mass(rest % n);
      rest /= n;
    }
    z_weight[z] = w;
  }

  const double* fv = f.values().data();
  const double* gv = g.values().data();
  std::vector<double> out(out_size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(out_size); ++idx) {
    const std::size_t u = static_cast<std::size_t>(idx);
    const std::size_t s = u % n_s;
    const std::size_t t = (u / n_s) % n_t;
    const std::size_t gamma = u / (n_s * n_t);
    const std::size_t off_f = gamma * n_t + t;
    const std::size_t off_g = gamma * n_s + s;
    double acc = 0.0;
    for (std::size_t z = 0; z < n_z; ++z) {
      acc += fv[z * stride_f + off_f] * gv[z * stride_g + off_g] * z_weight[z];
    }
    out[u] = acc;
  }
  return PiecewiseKernel(out_order, f.shared_partition(), std::move(out));
}

PiecewiseKernel symmetrize(const PiecewiseKernel& f) {
  const unsigned q = f.order();
  if (q > kMaxSymmetrizeOrder) {
    throw DomainError("symmetrize: order " + std::to_string(q) + " exceeds the cap of " +
                      std::to_string(kMaxSymmetrizeOrder));
  }
  if (q <= 1) return f;
  const std::size_t n = f.cells();
  const std::size_t size = f.size();
  const auto values = f.values();

  std::vector<std::uint32_t> rep(size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i) {
    rep[static_cast<std::size_t>(i)] =
        static_cast<std::uint32_t>(detail::orbit_representative(static_cast<std::size_t>(i), n, q));
  }

  // Each orbit element is reached by q!/|orbit| permutations, so the
  // permutation average equals the orbit mean. Orbits whose entries already
  // agree keep their value bit for bit.
  std::vector<double> sum(size, 0.0);
  std::vector<std::uint32_t> count(size, 0);
  std::vector<char> uniform(size, 1);
  for (std::size_t i = 0; i < size; ++i) {
    const std::uint32_t r = rep[i];
    sum[r] += values[i];
    ++count[r];
    if (values[i] != values[r]) uniform[r] = 0;
  }
  std::vector<double> out(size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i) {
    const std::uint32_t r = rep[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = uniform[r] ? values[r] : sum[r] / count[r];
  }
  return PiecewiseKernel(q, f.shared_partition(), std::move(out));
}

double inner(const PiecewiseKernel& f, const PiecewiseKernel& g) {
  require_same_shape(f, g, "inner");
  const double* fv = f.values().data();
  const double* gv = g.values().data();
  return detail::weighted_reduce(f.order(), f.partition(),
                                 [=](std::size_t i) { return fv[i] * gv[i]; });
}

double l2_norm_sq(const PiecewiseKernel& f) {
  const double* fv = f.values().data();
  return detail::weighted_reduce(f.order(), f.partition(),
                                 [=](std::size_t i) { return fv[i] * fv[i]; });
}

double l2_norm(const PiecewiseKernel& f) { return std::sqrt(l2_norm_sq(f)); }

double l4_norm(const PiecewiseKernel& f) {
  const double* fv = f.values().data();
  const double s = detail::weighted_reduce(f.order(), f.partition(), [=](std::size_t i) {
    const double v2 = fv[i] * fv[i];
    return v2 * v2;
  });
  return std::sqrt(std::sqrt(s));
}

PiecewiseKernel lincomb(double a, const PiecewiseKernel& f, double b, const PiecewiseKernel& g) {
  require_same_shape(f, g, "lincomb");
  std::vector<double> out(f.size());
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * fv[i] + b * gv[i];
  return PiecewiseKernel(f.order(), f.shared_partition(), std::move(out));
}

bool technical_assumptions_hold(const PiecewiseKernel& f) {
  for (double m : f.partition().masses()) {
    if (!std::isfinite(m) || !(m > f.partition().alpha())) return false;
  }
  for (double v : f.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_symmetric(const PiecewiseKernel& f, const char* where) {
  if (!f.is_symmetric(1e-12)) throw DomainError(std::string(where) + ": kernel is not symmetric");
}

}  // namespace chaoslab

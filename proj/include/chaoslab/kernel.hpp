#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace chaoslab {

/// Finite partition B_1..B_N of the state space, described by the cell
/// measures m_i = mu(B_i). Every mass satisfies alpha < m_i < inf.
class Partition {
 public:
  /// alpha defaults to half the smallest mass.
  explicit Partition(std::vector<double> masses);
  Partition(std::vector<double> masses, double alpha);

  static Partition unit(std::size_t cells);

  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass(std::size_t i) const { return masses_.at(i); }
  double alpha() const noexcept { return alpha_; }

  bool operator==(const Partition& other) const noexcept {
    return masses_ == other.masses_;
  }

 private:
  std::vector<double> masses_;
  double alpha_;
};

/// Largest dense tensor (in entries) any operation will materialize.
inline constexpr std::uint64_t kDenseEntryCap = std::uint64_t{1} << 25;

/// N^order with the dense-size guard applied.
std::size_t tensor_size(std::size_t cells, unsigned order);

/// Function on Z^q that is constant on every product cell
/// B_{i_1} x ... x B_{i_q}. Values are stored row-major; order 0 is a scalar.
/// Instances are immutable.
class PiecewiseKernel {
 public:
  PiecewiseKernel(unsigned order, Partition partition, std::vector<double> values);
  PiecewiseKernel(unsigned order, std::shared_ptr<const Partition> partition,
                  std::vector<double> values);

  static PiecewiseKernel zeros(unsigned order, const Partition& partition);
  static PiecewiseKernel scalar(double value, const Partition& partition);

  unsigned order() const noexcept { return order_; }
  std::size_t cells() const noexcept { return partition_->size(); }
  const Partition& partition() const noexcept { return *partition_; }
  std::shared_ptr<const Partition> shared_partition() const noexcept { return partition_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(std::span<const std::size_t> index) const;

  /// Invariance under every index permutation, up to tol * max|value|.
  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  unsigned order_;
  std::shared_ptr<const Partition> partition_;
  std::vector<double> values_;
};

/// Symmetric array h on {1..N}^q vanishing whenever two indices coincide.
class IndexFunction {
 public:
  /// Validates symmetry (to 1e-12 relative) and vanishing diagonals.
  IndexFunction(unsigned order, std::size_t size, std::vector<double> values);

  unsigned order() const noexcept { return order_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(std::span<const std::size_t> index) const;

  /// ||h||_(N,q), the plain Euclidean norm of the array.
  double norm() const;

 private:
  unsigned order_;
  std::size_t size_;
  std::vector<double> values_;
};

enum class SignClass { nonnegative, nonpositive, zero, mixed };

/// Entrywise sign test with a 1e-14 absolute tolerance.
SignClass sign_class(std::span<const double> values);
inline bool sign_constant(SignClass s) { return s != SignClass::mixed; }

/// Tamed kernel F(i) = h(i) / sqrt(m_{i_1} ... m_{i_q}).
PiecewiseKernel from_index_function(const IndexFunction& h, const Partition& partition);

/// f *_r^l g of order p+q-r-l, output slots ordered (gamma, t, s): the r-l
/// identified-but-kept variables, then the free variables of f, then those of g.
PiecewiseKernel contract(const PiecewiseKernel& f, const PiecewiseKernel& g,
                         unsigned r, unsigned l);

/// Highest order symmetrize() accepts.
inline constexpr unsigned kMaxSymmetrizeOrder = 8;

/// Canonical symmetrization (1/q!) sum_pi f∘pi, computed by averaging over
/// index orbits (O(N^q) instead of O(q! N^q)).
PiecewiseKernel symmetrize(const PiecewiseKernel& f);

double inner(const PiecewiseKernel& f, const PiecewiseKernel& g);
double l2_norm(const PiecewiseKernel& f);
double l2_norm_sq(const PiecewiseKernel& f);
double l4_norm(const PiecewiseKernel& f);

PiecewiseKernel lincomb(double a, const PiecewiseKernel& f, double b, const PiecewiseKernel& g);

/// Integrability conditions behind the contraction calculus. On a finite
/// partition they reduce to finiteness of masses and values, which every
/// constructed kernel already satisfies; the check is kept explicit.
bool technical_assumptions_hold(const PiecewiseKernel& f);

/// Throws DomainError unless f is symmetric.
void require_symmetric(const PiecewiseKernel& f, const char* where);

}  // namespace chaoslab

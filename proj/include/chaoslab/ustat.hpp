#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/kernel.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

/// Symmetric kernel on ([0,1]^d)^q that is constant on the g^d equal-volume
/// grid cells, together with the cell probabilities p_j of the sampling
/// density (uniform unless given).
class GridKernel {
 public:
  GridKernel(unsigned order, unsigned dim, std::size_t grid, std::vector<double> values);
  GridKernel(unsigned order, unsigned dim, std::size_t grid, std::vector<double> values,
             std::vector<double> weights);

  unsigned order() const noexcept { return order_; }
  unsigned dim() const noexcept { return dim_; }
  std::size_t grid() const noexcept { return grid_; }
  std::size_t cells() const noexcept { return weights_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> weights() const noexcept { return weights_; }

  GridKernel scaled(double factor) const;

 private:
  unsigned order_;
  unsigned dim_;
  std::size_t grid_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// max over fixed (q-1)-tuples of |sum_j values(j, rest) p_j|.
double degeneracy_defect(const GridKernel& k);

/// Hoeffding centering in every slot; the result is completely degenerate.
GridKernel project_degenerate(const GridKernel& k);

/// Kernel of I_q for the Poisson U-statistic of a degenerate grid kernel at
/// intensity n: values / q! over cells with masses n p_j.
PiecewiseKernel to_piecewise_kernel(const GridKernel& k, double n);

/// Degenerate grid kernel on 2K cells (d = 1) whose Poisson U-statistic at
/// intensity n is Q_q(2K, h', P) with h'(a) = sign(a) h(c(a)) / 2^(q/2).
/// Cells 2c and 2c+1 split super-cell c with signs + and -, so U_n equals
/// Q_q(K, h, X) for the unit-variance X_c = (P_2c - P_2c+1) / sqrt(2).
GridKernel signed_lift(const IndexFunction& h, double n);

/// Sum over increasing point tuples given per-cell point counts:
/// sum over sorted cell tuples a of v(a) prod_c C(count_c, mult_c).
double ustat_from_counts(const GridKernel& k, std::span<const std::uint64_t> counts);
/// Literal increasing-tuple sum over the given point cells (reference path).
double ustat_naive(const GridKernel& k, std::span<const std::size_t> point_cells);

/// Cell of one point drawn from the cell weights.
std::size_t sample_cell(const GridKernel& k, Philox4x32& engine);

double sample_poisson_ustat(const GridKernel& k, double n, Philox4x32& engine);
double sample_classical_ustat(const GridKernel& k, std::size_t n, Philox4x32& engine);

struct CoupledDraw {
  double poisson = 0;    // U_n over the first N_n points
  double classical = 0;  // U^_n over the first n points
  std::uint64_t poisson_count = 0;
};

/// One coupled draw sharing the point stream Y_1, Y_2, ...
CoupledDraw coupled_draw(const GridKernel& k, std::size_t n, Philox4x32& engine);

struct GapEstimate {
  double gap = 0;  // mean of (U_n - U^_n)^2
  double standard_error = 0;
  std::string stream;
};

GapEstimate coupled_gap(const GridKernel& k, std::size_t n, std::size_t draws,
                        std::uint64_t seed, std::uint32_t tag = stream_tag("coupled_gap"));

struct GammaConditionEstimate {
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  double se1 = 0, se2 = 0, se3 = 0, se4 = 0;
  double statistic = 0;  // m4 - 12 m3
  double statistic_se = 0;
  std::string stream;
};

/// Monte Carlo moments of the Poisson U-statistic U_n.
GammaConditionEstimate gamma_condition_estimate(const GridKernel& k, std::size_t n,
                                                std::size_t draws, std::uint64_t seed,
                                                std::uint32_t tag = stream_tag("ustat_gamma"));

/// int h^4 dmu_n^q / (int h^2 dmu_n^q)^2 for mu_n = n p.
double moment_ratio(const GridKernel& k, double n);

// Flat text format: header "q d g", weights line, (g^d)^q values one per line.
void write_grid_kernel(std::ostream& out, const GridKernel& k);
GridKernel read_grid_kernel(std::istream& in);

}  // namespace chaoslab

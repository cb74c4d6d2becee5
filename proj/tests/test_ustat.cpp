#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "chaoslab/errors.hpp"
#include "chaoslab/moments.hpp"
#include "chaoslab/ustat.hpp"

using namespace chaoslab;
using testing::rel_close;

namespace {

GridKernel random_grid_kernel(unsigned q, std::size_t g, Philox4x32& eng) {
  const auto f = random_symmetric_kernel(q, Partition::unit(g), eng);
  return GridKernel(q, 1, g, std::vector<double>(f.values().begin(), f.values().end()));
}

}  // namespace

TEST_CASE("grid kernel validation") {
  CHECK_THROWS_AS(GridKernel(2, 1, 2, {0, 1, 2, 0}), DomainError);
  CHECK_THROWS_AS(GridKernel(2, 1, 2, {0, 1, 1}), ShapeError);
  CHECK_THROWS_AS(GridKernel(1, 1, 2, {1, 1}, {0.3, 0.3}), DomainError);
  CHECK_NOTHROW(GridKernel(1, 2, 2, {1, 2, 3, 4}));
}

TEST_CASE("degeneracy defect") {
  CHECK(degeneracy_defect(GridKernel(2, 1, 2, {1, -1, -1, 1})) == 0.0);
  CHECK(degeneracy_defect(GridKernel(2, 1, 2, {1, 1, 1, 1})) == 1.0);
  CHECK(degeneracy_defect(GridKernel(2, 1, 2, {0, 1, 1, 0})) == 0.5);
}

TEST_CASE("degenerate projection") {
  Philox4x32 eng(41, 1, 0);
  for (unsigned q = 1; q <= 3; ++q) {
    const auto k = random_grid_kernel(q, 4, eng);
    const auto p = project_degenerate(k);
    CHECK(degeneracy_defect(p) < 1e-12);
    const auto pp = project_degenerate(p);
    CHECK(std::equal(p.values().begin(), p.values().end(), pp.values().begin()));
  }
  const auto c = project_degenerate(GridKernel(2, 1, 3, std::vector<double>(9, 2.5)));
  for (double v : c.values()) CHECK(std::abs(v) < 1e-15);
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  const auto f = random_symmetric_kernel(2, Partition::unit(4), eng);
  const auto pw = project_degenerate(
      GridKernel(2, 1, 4, std::vector<double>(f.values().begin(), f.values().end()), w));
  CHECK(degeneracy_defect(pw) < 1e-12);
}

TEST_CASE("U-statistic evaluation") {
  const GridKernel ones(2, 1, 3, std::vector<double>(9, 1.0));
  Philox4x32 eng(42, 1, 0);
  CHECK(sample_classical_ustat(ones, 5, eng) == 10.0);
  const std::vector<std::uint64_t> counts{2, 0, 3};
  CHECK(ustat_from_counts(ones, counts) == 10.0);

  for (unsigned q = 1; q <= 4; ++q) {
    const auto k = random_grid_kernel(q, 3, eng);
    std::vector<std::size_t> points(12);
    std::vector<std::uint64_t> cnt(3, 0);
    for (auto& pnt : points) {
      pnt = sample_cell(k, eng);
      ++cnt[pnt];
    }
    CHECK(rel_close(ustat_from_counts(k, cnt), ustat_naive(k, points), 1e-12));
  }
  CHECK(ustat_naive(ones, std::vector<std::size_t>{1}) == 0.0);
  CHECK_THROWS_AS(ustat_naive(ones, std::vector<std::size_t>(3001, 0)), GuardError);
  CHECK_THROWS_AS(ustat_from_counts(ones, std::vector<std::uint64_t>{1, 2}), ShapeError);
}

TEST_CASE("coupled draw shares the point stream") {
  Philox4x32 probe(0, 0, 0);
  const auto k = project_degenerate(random_grid_kernel(2, 4, probe));
  const std::size_t n = 20;
  int equal_cases = 0;
  for (std::uint64_t i = 0; i < 400; ++i) {
    Philox4x32 eng(43, 1, i);
    const auto d = coupled_draw(k, n, eng);
    if (d.poisson_count == n) {
      CHECK(d.poisson == d.classical);
      ++equal_cases;
    }
  }
  CHECK(equal_cases > 0);
}

TEST_CASE("degenerate Poisson U-statistics are centred") {
  Philox4x32 eng(44, 1, 0);
  const auto k = project_degenerate(random_grid_kernel(2, 4, eng));
  const auto e = gamma_condition_estimate(k, 50, 20000, 7);
  CHECK(std::abs(e.m1) < 5 * e.se1);
  const double exact = second_moment(to_piecewise_kernel(k, 50));
  CHECK(std::abs(e.m2 - exact) < 5 * e.se2);
}

TEST_CASE("signed lift") {
  const auto h = canonical_family_q2(4);
  const auto lift = signed_lift(h, 200.0);
  CHECK(lift.cells() == 8);
  CHECK(degeneracy_defect(lift) < 1e-12);
  const auto f = to_piecewise_kernel(lift, 200.0);
  CHECK(rel_close(second_moment(f), 1.5, 1e-12));
  CHECK(f.is_symmetric());
}

TEST_CASE("moment ratio and IO") {
  const GridKernel k(2, 1, 2, {1, -1, -1, 1});
  CHECK(moment_ratio(k, 1.0) == doctest::Approx(1.0));
  CHECK(moment_ratio(k, 4.0) == doctest::Approx(1.0 / 16.0));
  std::stringstream ss;
  write_grid_kernel(ss, k);
  const auto back = read_grid_kernel(ss);
  CHECK(std::equal(k.values().begin(), k.values().end(), back.values().begin()));
  CHECK(back.grid() == 2);
  std::stringstream bad("2 1 2\n0.5 0.5\n1 2\n");
  CHECK_THROWS_AS(read_grid_kernel(bad), ConfigError);
}

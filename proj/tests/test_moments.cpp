#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/moments.hpp"

using namespace chaoslab;
using testing::rel_close;

namespace {

PiecewiseKernel canonical(std::size_t n) {
  return from_index_function(canonical_family_q2(n), Partition::unit(n));
}

}  // namespace

TEST_CASE("c_q constants") {
  CHECK(c_constant(2) == doctest::Approx(1.0));
  CHECK(c_constant(4) == doctest::Approx(1.0 / 18.0));
  CHECK(c_constant(6) == doctest::Approx(1.0 / 600.0));
  CHECK_THROWS_AS(c_constant(3), DomainError);
}

TEST_CASE("G operator special cases") {
  Philox4x32 eng(21, 1, 0);
  for (unsigned q = 1; q <= 3; ++q) {
    const auto f = random_symmetric_kernel(q, random_partition(3, 0.5, 2.0, eng), eng);
    const auto g0 = g_operator(f, 0);
    CHECK(rel_close(g0[0], double(factorial(q)) * l2_norm_sq(f), 1e-13));
    const auto top = g_operator(f, 2 * q);
    const auto tensor = symmetrize(contract(f, f, 0, 0));
    for (std::size_t i = 0; i < top.size(); ++i) CHECK(rel_close(top[i], tensor[i], 1e-12));
  }
  const auto f = random_symmetric_kernel(2, random_partition(4, 0.5, 2.0, eng), eng);
  const auto g2 = g_operator(f, 2);
  const auto expect = lincomb(4.0, symmetrize(contract(f, f, 1, 1)), 2.0, contract(f, f, 2, 0));
  for (std::size_t i = 0; i < g2.size(); ++i) CHECK(rel_close(g2[i], expect[i], 1e-12));
  CHECK_THROWS_AS(g_operator(f, 5), DomainError);
}

TEST_CASE("frozen rational oracle for the canonical q=2 family") {
  // Exact fractions from tests/oracles/q2_moments.py.
  const auto f4 = canonical(4);
  CHECK(rel_close(second_moment(f4), 3.0 / 2.0, 1e-14));
  CHECK(rel_close(third_moment_poisson(f4), 15.0 / 4.0, 1e-13));
  CHECK(rel_close(fourth_moment_poisson(f4), 309.0 / 8.0, 1e-13));
  CHECK(rel_close(moment_report(f4).gamma_statistic, -51.0 / 8.0, 1e-12));
  CHECK(rel_close(third_moment_gaussian(f4), 3.0, 1e-13));
  CHECK(rel_close(fourth_moment_gaussian(f4), 45.0 / 2.0, 1e-13));

  const auto f5 = canonical(5);
  CHECK(rel_close(second_moment(f5), 8.0 / 5.0, 1e-14));
  CHECK(rel_close(third_moment_poisson(f5), 112.0 / 25.0, 1e-13));
  CHECK(rel_close(fourth_moment_poisson(f5), 5408.0 / 125.0, 1e-13));
  CHECK(rel_close(moment_report(f5).gamma_statistic, -1312.0 / 125.0, 1e-12));
}

TEST_CASE("Gaussian third moment of the canonical family") {
  for (std::size_t n : {3, 4, 7, 10}) {
    const double nn = double(n);
    CHECK(rel_close(third_moment_gaussian(canonical(n)), 8.0 * (nn - 1) * (nn - 2) / (nn * nn), 1e-12));
  }
}

TEST_CASE("even-q third moment agrees with the general form") {
  Philox4x32 eng(22, 1, 0);
  for (unsigned q : {2u, 4u}) {
    for (int t = 0; t < 5; ++t) {
      const auto f = random_symmetric_kernel(q, random_partition(3, 0.5, 2.0, eng), eng);
      CHECK(rel_close(third_moment_poisson(f), third_moment_poisson_even(f), 1e-10));
    }
  }
  const auto f3 = random_symmetric_kernel(3, Partition::unit(3), eng);
  CHECK_THROWS_AS(third_moment_poisson_even(f3), DomainError);
}

TEST_CASE("structured q=2 route equals the dense route") {
  Philox4x32 eng(23, 1, 0);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_symmetric_kernel(2, random_partition(6, 0.5, 3.0, eng), eng);
    for (unsigned r = 0; r <= 2; ++r) {
      for (unsigned l = 0; l <= r; ++l) {
        if (r == 2 && l == 2) continue;
        CHECK(rel_close(sym_contraction_norm_sq(f, r, l, NormRoute::dense),
                        sym_contraction_norm_sq(f, r, l, NormRoute::structured), 1e-11));
      }
    }
    for (unsigned p = 0; p <= 4; ++p) {
      CHECK(rel_close(g_operator_norm_sq(f, p, NormRoute::dense),
                      g_operator_norm_sq(f, p, NormRoute::structured), 1e-11));
    }
  }
  const auto f4 = random_symmetric_kernel(4, Partition::unit(3), eng);
  CHECK_THROWS_AS(sym_contraction_norm_sq(f4, 1, 1, NormRoute::structured), DomainError);
}

TEST_CASE("large canonical kernel uses the structured route") {
  const auto f = canonical(512);
  const auto m = moment_report(f);
  CHECK(std::abs(m.gamma_statistic + 36.0) < 0.5);
  CHECK(rel_close(m.second, 2.0 * 511.0 / 512.0, 1e-12));
}

TEST_CASE("T-decomposition, A' and R") {
  Philox4x32 eng(24, 1, 0);
  for (unsigned q : {2u, 4u}) {
    for (int t = 0; t < 6; ++t) {
      const auto part = random_partition(3, 0.5, 2.0, eng);
      const auto sign = t % 3 == 0 ? RandomSign::mixed : (t % 3 == 1 ? RandomSign::nonnegative : RandomSign::nonpositive);
      const auto f = random_symmetric_kernel(q, part, eng, sign);
      const auto td = t_decomposition(f);
      CHECK(std::abs(td.residual) <= 1e-10 * std::abs(td.lhs) + 1e-12);

      const double qf = double(factorial(q));
      const double nf = l2_norm_sq(f);
      const double implied = fourth_moment_poisson(f) - 12.0 * third_moment_poisson(f) -
                             3.0 * qf * qf * nf * nf + 24.0 * qf * nf - r_term(f);
      const double ap = a_prime(f);
      const double scale = 3.0 * qf * qf * nf * nf;
      CHECK(implied >= ap - 1e-10 * scale);
      if (q == 2) CHECK(std::abs(implied - ap) <= 1e-10 * scale);
      if (sign != RandomSign::mixed) CHECK(ap >= -1e-12 * scale);
      if (q == 4 && sign == RandomSign::nonpositive) CHECK(r_term(f) >= -1e-12 * scale);
    }
  }
  CHECK_THROWS_AS(t_decomposition(random_symmetric_kernel(3, Partition::unit(2), eng)), DomainError);
  CHECK_THROWS_AS(a_prime(random_symmetric_kernel(3, Partition::unit(2), eng)), DomainError);
}

TEST_CASE("A' lower-bound coefficients") {
  const auto c4 = a_prime_lower_coefficients(4);
  REQUIRE(c4.size() == 1);
  CHECK(c4[0] == doctest::Approx(6.0 / 36.0 - 1.0 / 8.0));
  CHECK(a_prime_lower_coefficients(2).empty());
  bool negative = false;
  for (double c : a_prime_lower_coefficients(6)) negative = negative || c < 0;
  CHECK(negative);
}

TEST_CASE("symmetrization identity and contraction inequalities") {
  Philox4x32 eng(25, 1, 0);
  for (unsigned q = 1; q <= 3; ++q) {
    const auto f = random_symmetric_kernel(q, random_partition(3, 0.5, 2.0, eng), eng);
    const auto id = symmetrization_identity_check(f);
    CHECK(id.gap < 1e-12);
  }
  CHECK_THROWS_AS(symmetrization_identity_check(random_symmetric_kernel(4, Partition::unit(2), eng)),
                  GuardError);
  for (unsigned q = 2; q <= 4; ++q) {
    const auto mixed = random_symmetric_kernel(q, random_partition(3, 0.5, 2.0, eng), eng);
    for (const auto& c : contraction_inequality_checks(mixed)) {
      CHECK(c.name != "reverse");
      CHECK(c.satisfied);
    }
    const auto pos = random_symmetric_kernel(q, random_partition(3, 0.5, 2.0, eng), eng,
                                             RandomSign::nonnegative);
    int reverse = 0;
    for (const auto& c : contraction_inequality_checks(pos)) {
      reverse += c.name == "reverse";
      CHECK(c.satisfied);
    }
    CHECK(reverse == int(q));
  }
}

TEST_CASE("diagnostics of the canonical family") {
  const auto d8 = condition_iii_diagnostics(canonical(8));
  const auto d32 = condition_iii_diagnostics(canonical(32));
  CHECK(d32.middle_deviation < d8.middle_deviation);
  CHECK(d32.l4 < d8.l4);
  CHECK(d32.condition_iii_max() < d8.condition_iii_max());
  CHECK(d8.contraction_norms.count({1, 1}) == 0);
  CHECK(d8.contraction_norms.count({2, 1}) == 1);
  const auto refl = condition_iii_diagnostics(canonical(8), TargetLaw::reflected);
  CHECK(refl.middle_deviation_reflected > refl.middle_deviation);
}

TEST_CASE("zero kernel") {
  const auto z = PiecewiseKernel::zeros(2, Partition::unit(3));
  const auto m = moment_report(z);
  CHECK(m.second == 0.0);
  CHECK(m.third == 0.0);
  CHECK(m.fourth == 0.0);
  CHECK(a_prime(z) == 0.0);
  CHECK(r_term(z) == 0.0);
}

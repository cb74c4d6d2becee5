#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/kernel_io.hpp"
#include "chaoslab/reference.hpp"

using namespace chaoslab;
using testing::raw_kernel;
using testing::rel_close;

TEST_CASE("combinatorics") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(40, 20) == 137846528820ULL);
  CHECK_THROWS_AS(factorial(21), GuardError);
  CHECK_THROWS_AS(checked_pow(10, 20), GuardError);
  CHECK(permutation_class_count(1, 0) == 1);
  CHECK(permutation_class_count(1, 1) == 1);
  CHECK(permutation_class_count(2, 1) == 16);
  CHECK_THROWS_AS(permutation_class_count(2, 3), DomainError);
}

TEST_CASE("permutation classes match enumeration of S_2M") {
  for (unsigned M = 1; M <= 3; ++M) {
    std::vector<unsigned> sigma(2 * M);
    std::iota(sigma.begin(), sigma.end(), 0u);
    std::vector<std::uint64_t> counts(M + 1, 0);
    do {
      unsigned overlap = 0;
      for (unsigned i = 0; i < M; ++i) overlap += sigma[i] < M;
      ++counts[overlap];
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    std::uint64_t total = 0;
    for (unsigned p = 0; p <= M; ++p) {
      CHECK(counts[p] == permutation_class_count(M, p));
      total += counts[p];
    }
    CHECK(total == factorial(2 * M));
  }
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(Partition(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(Partition({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Partition({1.0, 2.0}, 1.0), DomainError);
  CHECK_THROWS_AS(Partition({1.0, INFINITY}), DomainError);
  const Partition p({1.0, 3.0});
  CHECK(p.alpha() == doctest::Approx(0.5));
  CHECK(Partition::unit(3).mass(2) == 1.0);
  CHECK_THROWS_AS(tensor_size(64, 5), GuardError);
  CHECK(tensor_size(4, 3) == 64);
}

TEST_CASE("from_index_function") {
  const IndexFunction h1(1, 2, {1.0, 0.0});
  const auto f1 = from_index_function(h1, Partition::unit(2));
  CHECK(f1[0] == 1.0);
  CHECK(l2_norm(f1) == doctest::Approx(1.0));

  const IndexFunction h = canonical_family_q2(4);
  const auto f = from_index_function(h, Partition::unit(4));
  CHECK(l2_norm_sq(f) == doctest::Approx(0.75));
  CHECK(std::pow(l4_norm(f), 4) == doctest::Approx(12.0 / 256.0));
  const auto g = from_index_function(h, Partition({4, 4, 4, 4}));
  CHECK(g[1] == doctest::Approx(1.0 / 16.0));
  CHECK(l2_norm_sq(g) == doctest::Approx(0.75));
  CHECK(g.is_symmetric());
  CHECK_THROWS_AS(from_index_function(h, Partition::unit(3)), ShapeError);

  Philox4x32 eng(5, 1, 0);
  for (int t = 0; t < 10; ++t) {
    const auto part = random_partition(4, 0.5, 3.0, eng);
    const auto hr = random_index_function(3, 4, eng);
    CHECK(rel_close(l2_norm(from_index_function(hr, part)), hr.norm(), 1e-13));
  }
}

TEST_CASE("index function validation") {
  CHECK_THROWS_AS(IndexFunction(2, 2, {0.0, 1.0, 2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(IndexFunction(2, 2, {1.0, 0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(IndexFunction(2, 2, {0.0, 1.0, 1.0}), ShapeError);
  CHECK_NOTHROW(IndexFunction(2, 2, {0.0, 0.5, 0.5, 0.0}));
}

TEST_CASE("contraction examples") {
  const auto part = Partition::unit(2);
  const PiecewiseKernel f(1, part, {1.0, 2.0});
  const PiecewiseKernel g(1, part, {3.0, 4.0});
  const auto t = contract(f, g, 0, 0);
  CHECK(t.order() == 2);
  CHECK(std::vector<double>(t.values().begin(), t.values().end()) == std::vector<double>{3, 4, 6, 8});

  const double a = 0.7;
  const PiecewiseKernel h(2, part, {0.0, a, a, 0.0});
  const auto k = contract(h, h, 1, 1);
  CHECK(k[0] == doctest::Approx(a * a));
  CHECK(k[1] == 0.0);
  CHECK(k[2] == 0.0);
  CHECK(k[3] == doctest::Approx(a * a));

  const auto s = contract(h, h, 2, 2);
  CHECK(s.order() == 0);
  CHECK(s[0] == doctest::Approx(l2_norm_sq(h)));

  CHECK_THROWS_AS(contract(h, h, 3, 0), DomainError);
  CHECK_THROWS_AS(contract(h, h, 1, 2), DomainError);
  CHECK_THROWS_AS(contract(h, PiecewiseKernel(2, Partition::unit(3), std::vector<double>(9)), 1, 1),
                  ShapeError);
}

TEST_CASE("parallel contraction agrees with the serial reference") {
  Philox4x32 eng(11, 2, 0);
  const auto part = random_partition(3, 0.5, 2.0, eng);
  for (unsigned p = 0; p <= 3; ++p) {
    for (unsigned q = 0; q <= 3; ++q) {
      const auto f = raw_kernel(p, part, eng);
      const auto g = raw_kernel(q, part, eng);
      for (unsigned r = 0; r <= std::min(p, q); ++r) {
        for (unsigned l = 0; l <= r; ++l) {
          const auto fast = contract(f, g, r, l);
          const auto slow = reference::contract(f, g, r, l);
          REQUIRE(fast.order() == slow.order());
          for (std::size_t i = 0; i < fast.size(); ++i) CHECK(rel_close(fast[i], slow[i], 1e-13));
        }
      }
    }
  }
}

TEST_CASE("contraction norm symmetry p <-> q-p") {
  Philox4x32 eng(12, 2, 0);
  for (unsigned q = 2; q <= 4; ++q) {
    const auto f = random_symmetric_kernel(q, random_partition(3, 0.5, 2.0, eng), eng);
    for (unsigned p = 1; p < q; ++p) {
      CHECK(rel_close(l2_norm(contract(f, f, p, p)), l2_norm(contract(f, f, q - p, q - p)), 1e-12));
    }
  }
}

TEST_CASE("orbit symmetrization") {
  const auto part = Partition::unit(2);
  const PiecewiseKernel e(2, part, {0.0, 1.0, 0.0, 0.0});
  const auto se = symmetrize(e);
  CHECK(se[1] == 0.5);
  CHECK(se[2] == 0.5);

  Philox4x32 eng(13, 2, 0);
  for (unsigned q = 1; q <= 5; ++q) {
    const auto part_q = random_partition(3, 0.5, 2.0, eng);
    const auto f = raw_kernel(q, part_q, eng);
    const auto fast = symmetrize(f);
    const auto slow = reference::symmetrize_exhaustive(f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(rel_close(fast[i], slow[i], 1e-13));
    CHECK(fast.is_symmetric());
    CHECK(l2_norm(fast) <= l2_norm(f) * (1 + 1e-14));
    const auto twice = symmetrize(fast);
    CHECK(std::equal(twice.values().begin(), twice.values().end(), fast.values().begin()));
    const auto g = raw_kernel(q, part_q, eng);
    CHECK(rel_close(inner(fast, g), inner(fast, symmetrize(g)), 1e-12));
  }
  const PiecewiseKernel big(9, Partition::unit(2), std::vector<double>(512, 1.0));
  CHECK_THROWS_AS(symmetrize(big), DomainError);
  CHECK_THROWS_AS(reference::symmetrize_exhaustive(PiecewiseKernel(7, Partition::unit(2), std::vector<double>(128))),
                  DomainError);
}

TEST_CASE("order-8 symmetrization of a tensor product") {
  Philox4x32 eng(14, 2, 0);
  const auto f = random_symmetric_kernel(4, Partition::unit(3), eng);
  const auto s = symmetrize(contract(f, f, 0, 0));
  CHECK(s.order() == 8);
  CHECK(s.is_symmetric());
}

TEST_CASE("inner products and norms") {
  Philox4x32 eng(15, 2, 0);
  const auto part = random_partition(4, 0.5, 2.0, eng);
  const auto f = raw_kernel(3, part, eng);
  const auto g = raw_kernel(3, part, eng);
  CHECK(rel_close(inner(f, g), reference::inner(f, g), 1e-13));
  CHECK(rel_close(l2_norm_sq(f), inner(f, f), 1e-14));
  const auto f2 = contract(f, f, 3, 0);  // pointwise square
  CHECK(rel_close(l2_norm(f2), l4_norm(f) * l4_norm(f), 1e-13));
  const auto zero = lincomb(1.0, f, -1.0, f);
  CHECK(l2_norm(zero) == 0.0);
  CHECK(l4_norm(zero) == 0.0);
  const auto dbl = lincomb(2.0, f, 0.0, g);
  CHECK(dbl[5] == 2.0 * f[5]);
  CHECK_THROWS_AS(inner(f, raw_kernel(2, part, eng)), ShapeError);
  CHECK(technical_assumptions_hold(f));
}

TEST_CASE("sign classes") {
  CHECK(sign_class(std::vector<double>{0.0, 1.0}) == SignClass::nonnegative);
  CHECK(sign_class(std::vector<double>{-1e-15, 1.0}) == SignClass::nonnegative);
  CHECK(sign_class(std::vector<double>{0.0, -1.0}) == SignClass::nonpositive);
  CHECK(sign_class(std::vector<double>{0.0, 0.0}) == SignClass::zero);
  CHECK(sign_class(std::vector<double>{-1.0, 1.0}) == SignClass::mixed);
}

TEST_CASE("kernel text format round trip") {
  Philox4x32 eng(16, 2, 0);
  const auto f = random_symmetric_kernel(2, random_partition(3, 0.5, 2.0, eng), eng);
  std::stringstream ss;
  write_kernel(ss, f);
  const auto g = read_kernel(ss);
  CHECK(g.order() == 2);
  CHECK(g.partition() == f.partition());
  CHECK(std::equal(f.values().begin(), f.values().end(), g.values().begin()));
  std::stringstream bad("2 2\n1 1\n0.5\n");
  CHECK_THROWS_AS(read_kernel(bad), ConfigError);
}

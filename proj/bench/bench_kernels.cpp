// OpenMP kernels against the serial reference implementations.

#include <benchmark/benchmark.h>

#include "chaoslab/families.hpp"
#include "chaoslab/kernel.hpp"
#include "chaoslab/mc_engine.hpp"
#include "chaoslab/reference.hpp"

using namespace chaoslab;

namespace {

PiecewiseKernel kernel(unsigned q, std::size_t n) {
  Philox4x32 eng(1, 1, q * 1000 + n);
  return random_symmetric_kernel(q, random_partition(n, 0.5, 2.0, eng), eng);
}

void BM_contract_parallel(benchmark::State& s) {
  const auto f = kernel(3, static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(contract(f, f, 1, 1));
}

void BM_contract_reference(benchmark::State& s) {
  const auto f = kernel(3, static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(reference::contract(f, f, 1, 1));
}

void BM_symmetrize_orbit(benchmark::State& s) {
  const auto f = contract(kernel(3, static_cast<std::size_t>(s.range(0))), kernel(3, static_cast<std::size_t>(s.range(0))), 0, 0);
  for (auto _ : s) benchmark::DoNotOptimize(symmetrize(f));
}

void BM_symmetrize_exhaustive(benchmark::State& s) {
  const auto f = contract(kernel(3, static_cast<std::size_t>(s.range(0))), kernel(3, static_cast<std::size_t>(s.range(0))), 0, 0);
  for (auto _ : s) benchmark::DoNotOptimize(reference::symmetrize_exhaustive(f));
}

void BM_homogeneous_sum(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  Philox4x32 eng(2, 2, n);
  const auto h = random_index_function(3, n, eng);
  const auto x = sample_sequence(SequenceSpec::gaussian(), n, eng);
  for (auto _ : s) benchmark::DoNotOptimize(homogeneous_sum(h, x));
}

void BM_homogeneous_sum_naive(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  Philox4x32 eng(2, 2, n);
  const auto h = random_index_function(3, n, eng);
  const auto x = sample_sequence(SequenceSpec::gaussian(), n, eng);
  for (auto _ : s) benchmark::DoNotOptimize(homogeneous_sum_naive(h, x));
}

void BM_mc_moments(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const auto h = canonical_family_q2(n);
  const auto spec = SequenceSpec::poisson_uniform(n, 1.0);
  for (auto _ : s) benchmark::DoNotOptimize(mc_moments(h, spec, 2000, 3));
}

}  // namespace

BENCHMARK(BM_contract_parallel)->Arg(8)->Arg(16);
BENCHMARK(BM_contract_reference)->Arg(8)->Arg(16);
BENCHMARK(BM_symmetrize_orbit)->Arg(3)->Arg(4);
BENCHMARK(BM_symmetrize_exhaustive)->Arg(3)->Arg(4);
BENCHMARK(BM_homogeneous_sum)->Arg(16)->Arg(32);
BENCHMARK(BM_homogeneous_sum_naive)->Arg(16)->Arg(32);
BENCHMARK(BM_mc_moments)->Arg(32)->Arg(128);

BENCHMARK_MAIN();

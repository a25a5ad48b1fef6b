#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "momentreg/conditioning.hpp"
#include "momentreg/maxent.hpp"
#include "momentreg/series.hpp"
#include "momentreg/transform.hpp"

using namespace momentreg;

namespace {

FormalSeries random_series(std::size_t d, std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FormalSeries s(d, n);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = Complex(u(rng), u(rng));
  s[0] = 1.5;
  return s;
}

void BM_series_pow(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto s = random_series(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(series_pow(s, 7));
  state.counters["terms"] = static_cast<double>(s.size());
}
BENCHMARK(BM_series_pow)->Args({1, 64})->Args({2, 16})->Args({3, 10})->Args({4, 8});

void BM_condition_line(benchmark::State& state) {
  std::vector<double> g(static_cast<std::size_t>(state.range(0)) + 1, 0.0);
  g[0] = 2.0;
  for (std::size_t k = 1; k < g.size(); ++k) g[k] = g[k - 1] * 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(condition_line(PowerMoments{g, HalfLine{}}));
}
BENCHMARK(BM_condition_line)->Arg(12)->Arg(24)->Arg(48);

void BM_fime_uniform(benchmark::State& state) {
  const auto deg = static_cast<std::size_t>(state.range(0));
  std::vector<double> gamma(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k) gamma[k] = 1.0 / (k + 1.0);
  const auto q = build_quadrature(0.0, 1.0, 201, QuadratureRule::gauss_legendre);
  const Basis basis{BasisKind::legendre, 0.0, 1.0, deg};
  const auto mu = basis_moments_from_power(basis, gamma);
  std::size_t updates = 0;
  for (auto _ : state) {
    const auto fit = solve_maxent(basis, q, mu);
    updates = fit.dual.iterations;
    benchmark::DoNotOptimize(fit.dual.alpha.data());
  }
  state.counters["updates"] = static_cast<double>(updates);
}
BENCHMARK(BM_fime_uniform)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_hilbert_line(benchmark::State& state) {
  auto f = GridFunction::interval(-1.0, 3.0, static_cast<std::size_t>(state.range(0)));
  for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = std::exp(-f.node(j) * f.node(j));
  const HilbertOptions opt{4, state.range(1) ? HilbertScheme::spectral : HilbertScheme::cell};
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_line(f, opt));
}
BENCHMARK(BM_hilbert_line)->Args({1024, 0})->Args({1024, 1})->Args({16384, 0})->Args({16384, 1});

}  // namespace

BENCHMARK_MAIN();

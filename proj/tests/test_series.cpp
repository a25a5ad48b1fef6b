#include <doctest.h>

#include <random>

#include "momentreg/series.hpp"
#include "oracles.hpp"

using namespace momentreg;

TEST_CASE("index set is graded with descending leading entry") {
  const auto ix = IndexSet::get(2, 2);
  REQUIRE(ix->size() == 6);
  const std::vector<MultiIndex> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK((*ix)[i] == expected[i]);
  CHECK(ix->degree_begin(1) == 1);
  CHECK(ix->degree_begin(2) == 3);
  CHECK(ix->degree_begin(3) == 6);
  CHECK(*ix->position({1, 1}) == 4);
  CHECK_FALSE(ix->position({2, 1}));
  CHECK(IndexSet::get(2, 2) == ix);
}

TEST_CASE("multinomial coefficient") {
  CHECK(MultiIndex{2, 1, 1}.multinomial() == doctest::Approx(12.0));
  CHECK(MultiIndex{0, 0}.multinomial() == 1.0);
}

TEST_CASE("series_pow examples") {
  SUBCASE("constant one") {
    auto one = FormalSeries::constant(1, 6, 1.0);
    auto b = series_pow(one, 5);
    CHECK(b[0] == Complex(1.0));
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i] == Complex{});
  }
  SUBCASE("b0 = a0^k") {
    std::mt19937_64 rng(7);
    auto a = oracle::random_series(rng, 2, 4, 1.0, false);
    auto b = series_pow(a, 4);
    CHECK(std::abs(b[0] - std::pow(a[0], 4)) < 1e-13 * std::abs(b[0]));
  }
  SUBCASE("(1 + 2z + 3z^2)^3 against convolution") {
    const std::vector<double> c{1, 2, 3};
    auto a = FormalSeries::univariate(c, 4);
    auto b = series_pow(a, 3);
    // Frozen from the convolution oracle: 1, 6, 21, 44, 63.
    const double expected[] = {1, 6, 21, 44, 63};
    for (int n = 0; n <= 4; ++n) CHECK(b[n].real() == doctest::Approx(expected[n]).epsilon(1e-14));
    CHECK(oracle::max_rel_diff(b, oracle::power(oracle::to_poly(a), 3, 1, 4)) < 1e-14);
  }
  SUBCASE("k = 0 and k = 1") {
    std::mt19937_64 rng(3);
    auto a = oracle::random_series(rng, 3, 3, 1.0, false);
    auto b0 = series_pow(a, 0);
    CHECK(b0[0] == Complex(1.0));
    for (std::size_t i = 1; i < b0.size(); ++i) CHECK(std::abs(b0[i]) < 1e-15);
    auto b1 = series_pow(a, 1);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b1[i] - a[i]) < 1e-14);
  }
  SUBCASE("errors") {
    FormalSeries z(1, 3);
    z[1] = 1.0;
    CHECK_THROWS_AS(series_pow(z, 2), std::invalid_argument);
    CHECK_THROWS_AS(series_pow(FormalSeries::constant(1, 3, 1.0), -1), std::invalid_argument);
  }
}

TEST_CASE("series_pow matches convolution on random multivariate series") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const std::size_t N = 1 + (trial * 7) % 8;
    const unsigned k = static_cast<unsigned>(trial % 7);
    auto a = oracle::random_series(rng, d, N, 1.0, false);
    auto b = series_pow(a, k);
    auto ref = oracle::power(oracle::to_poly(a), k, d, static_cast<unsigned>(N));
    double scale = 1.0;
    for (const auto& [idx, v] : ref) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto e = b.indices()[i].entries();
      worst = std::max(worst, std::abs(b[i] - oracle::coeff(ref, {e.begin(), e.end()})));
    }
    INFO("d=" << d << " N=" << N << " k=" << k);
    CHECK(worst / scale < 1e-12);
  }
}

TEST_CASE("series_pow_zero_free") {
  FormalSeries zero(1, 4);
  auto r0 = series_pow_zero_free(zero, 2);
  for (std::size_t i = 0; i < r0.size(); ++i) CHECK(std::abs(r0[i]) < 1e-15);

  FormalSeries z(1, 4);
  z[1] = 1.0;
  auto z3 = series_pow_zero_free(z, 3);
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(z3[n] - Complex(n == 3 ? 1.0 : 0.0)) < 1e-13);

  FormalSeries s(1, 4);
  s[1] = 1.0;
  s[2] = 1.0;
  auto s2 = series_pow_zero_free(s, 2);
  const double expected[] = {0, 0, 1, 2, 1};
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(s2[n] - Complex(expected[n])) < 1e-13);

  CHECK_THROWS_AS(series_pow_zero_free(FormalSeries::constant(1, 2, 1.0), 2),
                  std::invalid_argument);
}

TEST_CASE("accumulate_powers") {
  SUBCASE("zero series") {
    FormalSeries s(2, 3);
    auto r = accumulate_powers(s, log_one_minus_weights(3));
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == Complex{});
  }
  SUBCASE("-log(1 - az)") {
    const double a = 0.7;
    FormalSeries s(1, 16);
    s[1] = a;
    auto r = accumulate_powers(s, log_one_minus_weights(16));
    for (int n = 1; n <= 16; ++n)
      CHECK(std::abs(r[n] - Complex(std::pow(a, n) / n)) < 1e-14);
  }
  SUBCASE("z + z^2/2 against summed convolution powers") {
    FormalSeries s(1, 6);
    s[1] = 1.0;
    s[2] = 0.5;
    const auto w = log_one_minus_weights(6);
    auto r = accumulate_powers(s, w);
    oracle::Poly ref;
    const auto p = oracle::to_poly(s);
    for (unsigned k = 1; k <= 6; ++k)
      for (const auto& [idx, v] : oracle::power(p, k, 1, 6)) ref[idx] += v / double(k);
    CHECK(oracle::max_rel_diff(r, ref) < 1e-14);
  }
  SUBCASE("nonzero free term rejected") {
    CHECK_THROWS_AS(accumulate_powers(FormalSeries::constant(1, 2, 0.5), log_one_minus_weights(2)),
                    std::invalid_argument);
  }
}

TEST_CASE("series_exp") {
  auto one = series_exp(FormalSeries(1, 5));
  CHECK(one[0] == Complex(1.0));
  for (std::size_t i = 1; i < one.size(); ++i) CHECK(one[i] == Complex{});

  const double a = 0.5;
  FormalSeries log_geo(1, 16);
  for (int n = 1; n <= 16; ++n) log_geo[n] = std::pow(a, n) / n;
  auto geo = series_exp(log_geo);
  for (int n = 0; n <= 16; ++n) CHECK(std::abs(geo[n] - Complex(std::pow(a, n))) < 1e-14);

  CHECK_THROWS_AS(series_exp(FormalSeries::constant(1, 2, 1.0)), std::invalid_argument);
}

TEST_CASE("exp of -log(1 - S) is the geometric series 1/(1 - S)") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const std::size_t N = 6;
    auto s = oracle::random_series(rng, d, N, 0.2, true);
    auto r = series_exp(accumulate_powers(s, log_one_minus_weights(N)));
    oracle::Poly geo;
    const auto p = oracle::to_poly(s);
    for (unsigned k = 0; k <= N; ++k)
      for (const auto& [idx, v] : oracle::power(p, k, d, N)) geo[idx] += v;
    CHECK(oracle::max_rel_diff(r, geo) < 1e-12);
  }
}

TEST_CASE("truncating the input never changes lower-degree outputs") {
  std::mt19937_64 rng(5);
  auto a = oracle::random_series(rng, 2, 7, 1.0, false);
  auto full = series_pow(a, 3);
  auto low = series_pow(a.truncated(4), 3);
  for (std::size_t i = 0; i < low.size(); ++i)
    CHECK(std::abs(low[i] - full.coefficient(low.indices()[i])) < 1e-12 * std::abs(full[0]) + 1e-13);
}

TEST_CASE("arithmetic rejects mismatched shapes") {
  FormalSeries a(1, 3);
  FormalSeries b(1, 4);
  CHECK_THROWS_AS(a += b, std::invalid_argument);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
  CHECK_THROWS_AS(IndexSet::get(8, 20), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "momentreg/raybeam.hpp"
#include "oracles.hpp"

using namespace momentreg;

namespace {

struct Atom {
  std::vector<double> x;
  double w;
};

MultiMoments atomic_moments(const std::vector<Atom>& atoms, std::size_t d, std::size_t n) {
  MultiMoments g(d, n);
  const auto ix = IndexSet::get(d, n);
  for (std::size_t p = 0; p < ix->size(); ++p) {
    double s = 0.0;
    for (const auto& a : atoms) {
      double m = a.w;
      for (std::size_t i = 0; i < d; ++i) m *= std::pow(a.x[i], (*ix)[p][i]);
      s += m;
    }
    g.values[p] = s;
  }
  g.total_mass = g.values[0];
  return g;
}

}  // namespace

TEST_CASE("direction validation") {
  CHECK_THROWS_AS(RayDirection({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(RayDirection({}), std::invalid_argument);
  CHECK_NOTHROW(RayDirection({0.1, 2.0}));
}

TEST_CASE("pushforward_moments") {
  SUBCASE("mass at the origin") {
    const auto g = atomic_moments({{{0.0, 0.0, 0.0}, 3.0}}, 3, 5);
    const auto m = pushforward_moments(g, RayDirection({0.3, 1.0, 2.0}), 5);
    CHECK(m[0] == 3.0);
    for (std::size_t k = 1; k < m.size(); ++k) CHECK(m[k] == 0.0);
  }
  SUBCASE("single atom") {
    const std::vector<double> x0{0.4, 1.1};
    const auto g = atomic_moments({{x0, 1.5}}, 2, 8);
    const RayDirection y({0.7, 0.2});
    const double t = 0.7 * 0.4 + 0.2 * 1.1;
    const auto m = pushforward_moments(g, y, 8);
    for (std::size_t k = 0; k <= 8; ++k) CHECK(std::abs(m[k] - 1.5 * std::pow(t, k)) < 1e-13 * std::pow(t, k) * 1.5);
  }
  SUBCASE("identity direction in one dimension") {
    MultiMoments g(1, 4);
    g.values = {1.0, 0.2, 0.3, 0.4, 0.5};
    const auto m = pushforward_moments(g, RayDirection({1.0}), 4);
    CHECK(m == g.values);
  }
  SUBCASE("homogeneity") {
    const auto g = atomic_moments({{{0.2, 0.5}, 1.0}, {{0.9, 0.1}, 0.5}}, 2, 6);
    const auto m1 = pushforward_moments(g, RayDirection({0.3, 0.6}), 6);
    const auto m2 = pushforward_moments(g, RayDirection({0.6, 1.2}), 6);
    for (std::size_t k = 0; k <= 6; ++k) CHECK(m2[k] == doctest::Approx(std::pow(2.0, k) * m1[k]).epsilon(1e-13));
  }
  SUBCASE("errors") {
    const auto g = atomic_moments({{{0.2, 0.5}, 1.0}}, 2, 3);
    CHECK_THROWS_AS(pushforward_moments(g, RayDirection({1.0, 1.0}), 4), std::invalid_argument);
    CHECK_THROWS_AS(pushforward_moments(g, RayDirection({1.0}), 2), std::invalid_argument);
  }
}

TEST_CASE("ray_phase_moments") {
  const double c = 1.7;
  std::vector<double> m(9, 0.0);
  m[0] = c;
  const auto ph = ray_phase_moments(m);
  for (std::size_t j = 0; j < ph.size(); ++j) {
    const double expected = std::pow(c, j + 1.0) / (j + 1.0);
    CHECK(std::abs(ph[j] - expected) < 1e-12 * expected);
  }
  // Round trip through the inverse map.
  const std::vector<double> mm{0.8, 0.3, 0.2, 0.15, 0.12};
  const auto back = decondition_line(PowerMoments{ray_phase_moments(mm), HalfLine{}});
  for (std::size_t k = 0; k < mm.size(); ++k) CHECK(std::abs(back.values[k] - mm[k]) < 1e-12);
  CHECK_THROWS_AS(ray_phase_moments(std::vector<double>{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("Verblunsky identity over random directions") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < 4; ++i) atoms.push_back({{u(rng), u(rng), u(rng)}, u(rng)});
  const auto g = atomic_moments(atoms, 3, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const RayDirection y({u(rng), u(rng), u(rng)});
    const auto c = ray_phase_moments(pushforward_moments(g, y, 6));
    CHECK(std::abs(c[0] - g.values[0]) < 1e-12 * g.values[0]);
    for (double v : c) CHECK(std::isfinite(v));
  }
}

TEST_CASE("ray_window") {
  const auto g = atomic_moments({{{0.5, 0.5}, 1.0}}, 2, 4);
  const RayDirection y({1.0, 2.0});
  const auto c = ray_phase_moments(pushforward_moments(g, y, 4));
  bool rigorous = true;
  const auto w = ray_window(g, y, c, &rigorous);
  CHECK_FALSE(rigorous);
  CHECK(w.a == 0.0);
  CHECK(w.b == doctest::Approx(c[1] / c[0] + 6 * std::sqrt(c[2] / c[0])));

  auto boxed = g;
  boxed.box = std::vector<Interval>{{0.0, 1.0}, {0.25, 1.0}};
  const auto wb = ray_window(boxed, y, c, &rigorous);
  CHECK(rigorous);
  CHECK(wb.a == 0.5);
  CHECK(wb.b == 4.0);
}

TEST_CASE("reconstruct_ray on an atom peaks at its projection") {
  const std::vector<double> x0{0.6, 0.9};
  auto g = atomic_moments({{x0, 0.5}}, 2, 8);
  const RayDirection y({1.0, 1.0});
  RaySweepOptions opt;
  opt.grid = 1024;
  const auto s = reconstruct_ray(g, y, opt);
  CHECK(s.phase_moments[0] == doctest::Approx(0.5));
  for (double v : s.phase.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  std::size_t peak = 0;
  for (std::size_t j = 1; j < s.radon.size(); ++j)
    if (s.radon.values[j] > s.radon.values[peak]) peak = j;
  MESSAGE("atom slice peak at " << s.radon.node(peak) << ", projection 1.5, converged "
                                << s.dual.converged);
  // The exact atom phase is an indicator; maxent smooths it, so the fitted
  // slice only localises the atom to the smoothing width.
  CHECK(std::abs(s.radon.node(peak) - 1.5) < 0.05);

  // With the exact phase chi_[1.5, 2.0] the slice peaks within one cell.
  auto xi = GridFunction::interval(0.0, 4.0, 1024);
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double t = xi.node(j);
    xi.values[j] = (t > 1.5 && t < 2.0) ? 1.0 : 0.0;
  }
  const auto R = radon_slice(xi);
  peak = 0;
  for (std::size_t j = 1; j < R.size(); ++j)
    if (R.values[j] > R.values[peak]) peak = j;
  CHECK(std::abs(R.node(peak) - 1.5) <= xi.spacing());
  CHECK(R.integral() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("ray_sweep is ordered and deterministic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const auto g = atomic_moments({{{0.3, 0.6}, 1.0}, {{0.8, 0.2}, 0.7}}, 2, 4);
  std::vector<RayDirection> dirs;
  for (int i = 0; i < 6; ++i) dirs.emplace_back(std::vector<double>{u(rng), u(rng)});
  RaySweepOptions opt;
  opt.grid = 256;
  opt.fime.max_updates = 2000;
  opt.threads = 4;
  const auto a = ray_sweep(g, dirs, opt);
  opt.threads = 1;
  const auto b = ray_sweep(g, dirs, opt);
  REQUIRE(a.size() == dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    CHECK(a[i].direction[0] == dirs[i][0]);
    CHECK(a[i].radon.values == b[i].radon.values);
    CHECK(a[i].phase_moments == b[i].phase_moments);
  }

  MultiMoments bad(2, 4);
  CHECK_THROWS_AS(ray_sweep(bad, dirs, opt), std::invalid_argument);
}

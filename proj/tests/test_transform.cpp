#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "momentreg/transform.hpp"
#include "oracles.hpp"

using namespace momentreg;
using std::numbers::pi;

namespace {

double max_abs_diff(const GridFunction& f, const auto& ref) {
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    worst = std::max(worst, std::abs(f.values[j] - ref(f.node(j))));
  return worst;
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = GridFunction::interval(0.0, 1.0, 4);
  CHECK(g.node(0) == 0.125);
  CHECK(g.node(3) == 0.875);
  const auto c = GridFunction::circle(4);
  CHECK(c.node(0) == -pi);
  CHECK(c.node(2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(GridFunction::interval(0.0, 1.0, 6), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction::interval(1.0, 1.0, 8), std::invalid_argument);
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(0));
}

TEST_CASE("line Hilbert transform of an indicator") {
  // H chi_[0,c](x) = (1/pi) ln|(c - x)/x|; exact for the cell scheme when c
  // falls on a cell edge.
  const std::size_t G = 256;
  auto f = GridFunction::interval(0.0, 1.0, G);
  for (std::size_t j = 0; j < G / 2; ++j) f.values[j] = 1.0;
  const auto H = hilbert_line(f);
  const double err = max_abs_diff(H, [](double x) { return std::log(std::abs((0.5 - x) / x)) / pi; });
  CHECK(err < 1e-12);

  // Same data against the independent PV quadrature at a few points.
  for (std::size_t j : {5u, 100u, 127u, 128u, 200u}) {
    const double x = f.node(j);
    const double pv = oracle::pv_line([](double t) { return t <= 0.5 ? 1.0 : 0.0; }, 0.0, 1.0, x);
    CHECK(std::abs(H.values[j] - pv) < 1e-4);
  }
}

TEST_CASE("line Hilbert transform of a smooth bump, both schemes") {
  // H of a modulated Gaussian: e^{-x^2} cos(kx) -> -e^{-x^2} sin(kx) once the
  // spectrum clears the origin.
  const double k = 20.0;
  auto f = GridFunction::interval(-10.0, 10.0, 2048);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = f.node(j);
    f.values[j] = std::exp(-x * x) * std::cos(k * x);
  }
  auto expected = [k](double x) { return -std::exp(-x * x) * std::sin(k * x); };
  const auto Hs = hilbert_line(f, {4, HilbertScheme::spectral});
  CHECK(max_abs_diff(Hs, expected) < 1e-10);
  // The cell scheme is first order on smooth data: the sawtooth
  // interpolation error in the singular cell contributes f' h / pi.
  auto f2 = GridFunction::interval(-10.0, 10.0, 4096);
  for (std::size_t j = 0; j < f2.size(); ++j) {
    const double x = f2.node(j);
    f2.values[j] = std::exp(-x * x) * std::cos(k * x);
  }
  const double e1 = max_abs_diff(hilbert_line(f, {4, HilbertScheme::cell}), expected);
  const double e2 = max_abs_diff(hilbert_line(f2, {4, HilbertScheme::cell}), expected);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));

  // Spectral H o H = -I on data that vanishes at the window edges.
  const auto HHs = hilbert_line(Hs, {4, HilbertScheme::spectral});
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) worst = std::max(worst, std::abs(HHs.values[j] + f.values[j]));
  CHECK(worst < 1e-8);
}

TEST_CASE("circle Hilbert transform") {
  auto f = GridFunction::circle(256);
  for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = std::cos(3 * f.node(j));
  CHECK(max_abs_diff(hilbert_circle(f), [](double t) { return -std::sin(3 * t); }) < 1e-13);

  for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = std::exp(std::cos(f.node(j)));
  const auto H = hilbert_circle(f);
  for (std::size_t j : {0u, 17u, 64u, 128u, 200u}) {
    const double pv = oracle::pv_circle([](double s) { return std::exp(std::cos(s)); }, f.node(j));
    CHECK(std::abs(H.values[j] - pv) < 1e-8);
  }
  // H o H = -(f - mean f).
  const auto HH = hilbert_circle(H);
  const double mean = f.integral() / (2 * pi);
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(HH.values[j] + f.values[j] - mean) < 1e-12);

  CHECK_THROWS_AS(hilbert_circle(GridFunction::interval(0.0, 1.0, 8)), std::invalid_argument);
  CHECK_THROWS_AS(hilbert_line(GridFunction::circle(8)), std::invalid_argument);
}

TEST_CASE("invert_line on a constant phase") {
  // phi = beta on [a, b] gives rho = sin(pi beta)/pi ((b - x)/(x - a))^beta,
  // of mass beta (b - a).
  const double a = 0.0, b = 1.0, beta = 0.3;
  auto phi = GridFunction::interval(a, b, 1024);
  std::fill(phi.values.begin(), phi.values.end(), beta);
  const auto inv = invert_line(phi);
  const double err = max_abs_diff(inv.density, [&](double x) {
    return std::sin(pi * beta) / pi * std::pow((b - x) / (x - a), beta);
  });
  CHECK(err < 1e-10);
  CHECK_FALSE(inv.negativity_flag);
  CHECK(inv.clipped == 0);
  CHECK(std::abs(inv.density.integral() - beta * (b - a)) < 5e-3);

  auto bad = phi;
  bad.values[3] = 1.1;
  CHECK_THROWS_AS(invert_line(bad), std::domain_error);
}

TEST_CASE("invert_circle") {
  auto phi = GridFunction::circle(64);
  std::fill(phi.values.begin(), phi.values.end(), pi / 2);
  const auto inv = invert_circle(phi, 0.7);
  for (double v : inv.density.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_FALSE(inv.negativity_flag);

  std::fill(phi.values.begin(), phi.values.end(), 0.1);
  const auto neg = invert_circle(phi, 1.0);
  CHECK(neg.negativity_flag);
  CHECK(neg.min_raw < 0.0);
  CHECK(neg.density.values[0] == neg.min_raw);

  CHECK_THROWS_AS(invert_circle(phi, 0.0), std::invalid_argument);
  phi.values[0] = 4.0;
  CHECK_THROWS_AS(invert_circle(phi, 1.0), std::domain_error);
}

TEST_CASE("phase_from_density and radon_slice invert each other") {
  auto rho = GridFunction::interval(-1.0, 2.0, 2048);
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double x = rho.node(j);
    rho.values[j] = (x > 0.0 && x < 1.0) ? 0.4 * std::pow(std::sin(pi * x), 2) : 0.0;
  }
  const auto xi = phase_from_density(rho);
  for (double v : xi.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(xi.values.front() == 0.0);

  const auto back = invert_line(xi);
  double worst = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j)
    worst = std::max(worst, std::abs(back.density.values[j] - rho.values[j]));
  CHECK(worst < 1e-3);

  const auto R = radon_slice(xi);
  worst = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j)
    worst = std::max(worst, std::abs(R.values[j] - rho.values[j]));
  CHECK(worst < 1e-2);
}

TEST_CASE("cauchy_boundary_avg of the zero phase vanishes") {
  const auto f = cauchy_boundary_avg(GridFunction::interval(0.0, 1.0, 64));
  for (double v : f.values) CHECK(v == 0.0);
  const auto R = radon_slice(GridFunction::interval(0.0, 1.0, 64));
  for (double v : R.values) CHECK(v == 0.0);
}

TEST_CASE("grid CSV round trip is bit exact") {
  auto f = GridFunction::interval(-0.3, 1.7, 16);
  for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = std::sin(1.0 + 0.37 * j) / 3.0;
  std::stringstream ss;
  write_grid_csv(ss, f);
  CHECK(ss.str().starts_with("# schema=1\n"));
  const auto g = read_grid_csv(ss);
  CHECK(g.domain == f.domain);
  CHECK(g.a == f.a);
  CHECK(g.b == f.b);
  CHECK(g.values == f.values);

  std::stringstream bad("# schema=2\n");
  CHECK_THROWS(read_grid_csv(bad));
}

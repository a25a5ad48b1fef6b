#pragma once

// Independent reference implementations used only by the tests. They share
// no code with the library beyond its public types.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "momentreg/series.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Poly = std::map<std::vector<unsigned>, Complex>;

inline unsigned degree(const std::vector<unsigned>& a) {
  unsigned s = 0;
  for (unsigned v : a) s += v;
  return s;
}

inline Poly to_poly(const momentreg::FormalSeries& s) {
  Poly p;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto e = s.indices()[i].entries();
    if (s[i] != Complex{}) p[{e.begin(), e.end()}] = s[i];
  }
  return p;
}

// Truncated product by explicit double loop over map entries.
inline Poly multiply(const Poly& a, const Poly& b, unsigned order) {
  Poly out;
  for (const auto& [ia, va] : a)
    for (const auto& [ib, vb] : b) {
      std::vector<unsigned> s(ia.size());
      for (std::size_t m = 0; m < s.size(); ++m) s[m] = ia[m] + ib[m];
      if (degree(s) <= order) out[s] += va * vb;
    }
  return out;
}

inline Poly power(const Poly& a, unsigned k, std::size_t dim, unsigned order) {
  Poly out{{std::vector<unsigned>(dim, 0u), Complex{1.0}}};
  for (unsigned i = 0; i < k; ++i) out = multiply(out, a, order);
  return out;
}

inline Complex coeff(const Poly& p, const std::vector<unsigned>& idx) {
  auto it = p.find(idx);
  return it == p.end() ? Complex{} : it->second;
}

// Max |a - b| over the union of supports, relative to max(1, |b|).
inline double max_rel_diff(const momentreg::FormalSeries& s, const Poly& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto e = s.indices()[i].entries();
    const Complex r = coeff(ref, {e.begin(), e.end()});
    worst = std::max(worst, std::abs(s[i] - r) / std::max(1.0, std::abs(r)));
  }
  return worst;
}

inline momentreg::FormalSeries random_series(std::mt19937_64& rng, std::size_t d,
                                             std::size_t order, double scale,
                                             bool zero_free) {
  std::uniform_real_distribution<double> u(-scale, scale);
  momentreg::FormalSeries s(d, order);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = Complex(u(rng), u(rng));
  if (zero_free) s[0] = 0.0;
  else s[0] = Complex(1.0 + std::abs(u(rng)), u(rng));
  return s;
}

// (1/pi) PV int_lo^hi f(t)/(t - x) dt by a dense midpoint rule on a grid
// symmetric about x, so the singular cells cancel pairwise.
inline double pv_line(const std::function<double(double)>& f, double lo, double hi,
                      double x, std::size_t n = 200000) {
  const double R = std::max(x - lo, hi - x);
  const double h = R / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (static_cast<double>(i) + 0.5) * h;
    double fr = 0.0;
    double fl = 0.0;
    if (x + d <= hi && x + d >= lo) fr = f(x + d);
    if (x - d >= lo && x - d <= hi) fl = f(x - d);
    s += (fr - fl) / d;
  }
  return s * h / std::numbers::pi;
}

// (1/2pi) PV int cot((s - theta)/2) f(s) ds, symmetric midpoint rule.
inline double pv_circle(const std::function<double(double)>& f, double theta,
                        std::size_t n = 100000) {
  const double h = std::numbers::pi / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) * h;
    s += (f(theta + u) - f(theta - u)) / std::tan(u / 2);
  }
  return s * h / (2.0 * std::numbers::pi);
}

// Density of x . p at t for a density rho on [0,1]^2: the line integral
// int rho(s, (t - p1 s)/p2) ds / p2 by a dense midpoint rule.
inline double radon_square(const std::function<double(double, double)>& rho,
                           double p1, double p2, double t, std::size_t n = 100000) {
  const double h = 1.0 / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = (static_cast<double>(i) + 0.5) * h;
    const double x2 = (t - p1 * x1) / p2;
    if (x2 >= 0.0 && x2 <= 1.0) s += rho(x1, x2);
  }
  return s * h / p2;
}

}  // namespace oracle

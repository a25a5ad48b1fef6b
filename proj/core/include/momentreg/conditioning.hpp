#pragma once

// Moment conditioning: maps the moments of a measure to the moments of its
// phase function (a density bounded by 1 on the line, by pi on the circle).
// All maps are triangular: output n depends on inputs 0..n only.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "momentreg/maxent.hpp"
#include "momentreg/series.hpp"

namespace momentreg {

struct HalfLine {
  friend bool operator==(HalfLine, HalfLine) = default;
};
struct Interval {
  double a = 0.0;
  double b = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};
using Support = std::variant<HalfLine, Interval>;

// gamma_k = integral x^k dmu, k = 0..N.
struct PowerMoments {
  std::vector<double> values;
  Support support = HalfLine{};

  std::size_t order() const { return values.empty() ? 0 : values.size() - 1; }
};

// tau(k) = (1/2pi) integral e^{-ik theta} dmu(theta), k = 0..M.
struct TrigMoments {
  std::vector<Complex> values;
};

// gamma_alpha for |alpha| <= order, stored in IndexSet order.
struct MultiMoments {
  std::size_t dimension = 1;
  std::size_t order = 0;
  std::vector<double> values;
  double total_mass = 0.0;
  std::optional<std::vector<Interval>> box;  // known support box, if any

  MultiMoments() = default;
  MultiMoments(std::size_t d, std::size_t n);

  double at(const MultiIndex& alpha) const;
  void set(const MultiIndex& alpha, double value);
};

// a_phi(n) = coefficient of w^{n+1} in sum_{k=1}^{N+1} S^k / k,
// S(w) = sum_n a_mu(n) w^{n+1}; i.e. -log(1 - S). Output support is
// HalfLine: the phase of a measure on [a, b] lives on [a, b + gamma_0].
PowerMoments condition_line(const PowerMoments& a_mu);

// Inverse map: a_mu = coefficients of 1 - exp(-sum a_phi(n) w^{n+1}).
PowerMoments decondition_line(const PowerMoments& a_phi);

// tau_phi(0) = pi/2; tau_phi(k) = [log(1 + S)]_k / (2i) with
// S(z) = sum_{n>=1} tau_mu(n)/tau_mu(0) z^n.
TrigMoments condition_circle(const TrigMoments& tau_mu);

// B(z) = sum_alpha (|alpha|!/alpha!) a_mu(alpha) z^alpha / mu(Delta);
// returns a_phi(alpha) = [log B]_alpha / (2i) for alpha != 0 and pi/2 at 0.
FormalSeries condition_polydisk(const MultiMoments& a_mu);

enum class Feasibility { feasible_interior, boundary, infeasible };

// Stieltjes pair [gamma_{i+j}] and [gamma_{i+j+1}]; eigenvalue threshold
// 1e-10 * max |gamma|.
Feasibility hankel_feasibility(const PowerMoments& gamma);

// gamma~_{2n} = v^T H^{-1} v with H = [gamma_{i+j}]_{i,j<n},
// v = (gamma_n, ..., gamma_{2n-1}): the value that makes the next Hankel
// determinant vanish. Input length must be even (2n >= 2).
double min_extension(const PowerMoments& gamma);

// gamma_n(max) = integral x^n p(x) dx for the maxent density fitted to
// gamma_0..gamma_{n-1}, n = gamma.values.size().
double max_extension(const PowerMoments& gamma, const MaxentResult& fit);

// Extends seed gamma_0..gamma_{n-1} for the weight exp P(x),
// P = sigma_0 + ... + sigma_n x^n, by
//   (k+1) gamma_k + sigma_1 gamma_{k+1} + 2 sigma_2 gamma_{k+2} + ...
//     + n sigma_n gamma_{k+n} = 0,
// returning gamma_0..gamma_{n+count-1}.
PowerMoments extend_exp_weight(std::span<const double> sigma,
                               const PowerMoments& seed, std::size_t count);

}  // namespace momentreg

#include "momentreg/conditioning.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace momentreg {

namespace {

constexpr double kImagTol = 1e-10;

double real_part_checked(Complex z, double scale, const char* who) {
  if (std::abs(z.imag()) > kImagTol * std::max(1.0, scale))
    throw std::runtime_error(std::string(who) +
                             ": unexpected imaginary part in real moment map");
  return z.real();
}

Eigen::MatrixXd hankel(std::span<const double> g, std::size_t size,
                       std::size_t shift) {
  Eigen::MatrixXd H(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) H(i, j) = g[i + j + shift];
  return H;
}

}  // namespace

MultiMoments::MultiMoments(std::size_t d, std::size_t n)
    : dimension(d), order(n), values(IndexSet::get(d, n)->size(), 0.0) {}

double MultiMoments::at(const MultiIndex& alpha) const {
  auto pos = IndexSet::get(dimension, order)->position(alpha);
  if (!pos) throw std::out_of_range("MultiMoments: index not stored");
  return values.at(*pos);
}

void MultiMoments::set(const MultiIndex& alpha, double value) {
  auto pos = IndexSet::get(dimension, order)->position(alpha);
  if (!pos) throw std::out_of_range("MultiMoments: index not stored");
  values.at(*pos) = value;
}

PowerMoments condition_line(const PowerMoments& a_mu) {
  if (a_mu.values.empty())
    throw std::invalid_argument("condition_line: empty moment sequence");
  if (!(a_mu.values[0] > 0.0))
    throw std::invalid_argument("condition_line: gamma_0 must be positive");
  const std::size_t N = a_mu.values.size() - 1;

  FormalSeries S(1, N + 1);
  for (std::size_t n = 0; n <= N; ++n) S[n + 1] = a_mu.values[n];
  const FormalSeries L = accumulate_powers(S, log_one_minus_weights(N + 1));

  PowerMoments out{std::vector<double>(N + 1), HalfLine{}};
  const double scale = std::pow(std::max(1.0, std::abs(a_mu.values[0])),
                                static_cast<double>(N + 1));
  for (std::size_t n = 0; n <= N; ++n)
    out.values[n] = real_part_checked(L[n + 1], scale, "condition_line");
  return out;
}

PowerMoments decondition_line(const PowerMoments& a_phi) {
  if (a_phi.values.empty())
    throw std::invalid_argument("decondition_line: empty moment sequence");
  const std::size_t N = a_phi.values.size() - 1;
  FormalSeries T(1, N + 1);
  for (std::size_t n = 0; n <= N; ++n) T[n + 1] = -a_phi.values[n];
  const FormalSeries E = series_exp(T);
  PowerMoments out{std::vector<double>(N + 1), HalfLine{}};
  for (std::size_t n = 0; n <= N; ++n) out.values[n] = -E[n + 1].real();
  return out;
}

TrigMoments condition_circle(const TrigMoments& tau_mu) {
  if (tau_mu.values.empty())
    throw std::invalid_argument("condition_circle: empty moment sequence");
  const Complex t0 = tau_mu.values[0];
  if (!(t0.real() > 0.0) || std::abs(t0.imag()) > kImagTol * t0.real())
    throw std::invalid_argument(
        "condition_circle: tau(0) must be real and positive");
  const std::size_t M = tau_mu.values.size() - 1;

  FormalSeries S(1, M);
  for (std::size_t n = 1; n <= M; ++n) S[n] = tau_mu.values[n] / t0.real();
  const FormalSeries L = accumulate_powers(S, log_one_plus_weights(M));

  TrigMoments out{std::vector<Complex>(M + 1)};
  out.values[0] = std::numbers::pi / 2;
  const Complex two_i{0.0, 2.0};
  for (std::size_t k = 1; k <= M; ++k) out.values[k] = L[k] / two_i;
  return out;
}

FormalSeries condition_polydisk(const MultiMoments& a_mu) {
  if (a_mu.dimension == 0)
    throw std::invalid_argument("condition_polydisk: dimension must be >= 1");
  if (!(a_mu.total_mass > 0.0))
    throw std::invalid_argument("condition_polydisk: total mass must be positive");
  const auto ix = IndexSet::get(a_mu.dimension, a_mu.order);
  if (a_mu.values.size() != ix->size())
    throw std::invalid_argument(
        "condition_polydisk: value count does not match dimension/order");

  FormalSeries B1(a_mu.dimension, a_mu.order);  // B - 1
  for (std::size_t p = 1; p < ix->size(); ++p)
    B1[p] = (*ix)[p].multinomial() * a_mu.values[p] / a_mu.total_mass;
  FormalSeries L = accumulate_powers(B1, log_one_plus_weights(a_mu.order));

  const Complex two_i{0.0, 2.0};
  for (std::size_t p = 1; p < L.size(); ++p) L[p] /= two_i;
  L[0] = std::numbers::pi / 2;
  return L;
}

Feasibility hankel_feasibility(const PowerMoments& gamma) {
  const auto& g = gamma.values;
  if (g.empty()) throw std::invalid_argument("hankel_feasibility: empty input");
  const std::size_t m = g.size() - 1;
  double scale = 0.0;
  for (double v : g) scale = std::max(scale, std::abs(v));
  const double tol = 1e-10 * scale;

  std::vector<Eigen::MatrixXd> blocks{hankel(g, m / 2 + 1, 0)};
  if (m >= 1) blocks.push_back(hankel(g, (m - 1) / 2 + 1, 1));

  bool interior = true;
  for (const auto& H : blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -tol) return Feasibility::infeasible;
    if (lo <= tol) interior = false;
  }
  return interior ? Feasibility::feasible_interior : Feasibility::boundary;
}

double min_extension(const PowerMoments& gamma) {
  const auto& g = gamma.values;
  if (g.size() < 2 || g.size() % 2 != 0)
    throw std::invalid_argument(
        "min_extension: need an even number (>= 2) of moments");
  const std::size_t n = g.size() / 2;
  const Eigen::MatrixXd H = hankel(g, n, 0);
  Eigen::VectorXd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = g[n + i];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  double scale = 0.0;
  for (double x : g) scale = std::max(scale, std::abs(x));
  if (es.eigenvalues().minCoeff() <= 1e-10 * scale)
    throw std::invalid_argument(
        "min_extension: leading Hankel block is singular or indefinite");
  const Eigen::VectorXd x = H.ldlt().solve(v);
  return v.dot(x);
}

double max_extension(const PowerMoments& gamma, const MaxentResult& fit) {
  if (!fit.dual.converged)
    throw std::invalid_argument("max_extension: maxent dual did not converge");
  const double n = static_cast<double>(gamma.values.size());
  const auto& q = fit.quadrature;
  double sum = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j)
    sum += q.weights[j] * std::pow(q.nodes[j], n) * fit.density(q.nodes[j]);
  return sum;
}

PowerMoments extend_exp_weight(std::span<const double> sigma,
                               const PowerMoments& seed, std::size_t count) {
  if (sigma.size() < 2)
    throw std::invalid_argument("extend_exp_weight: polynomial degree must be >= 1");
  const std::size_t n = sigma.size() - 1;
  if (sigma[n] == 0.0)
    throw std::invalid_argument("extend_exp_weight: leading coefficient is zero");
  if (seed.values.size() != n)
    throw std::invalid_argument("extend_exp_weight: seed length must equal degree");

  PowerMoments out = seed;
  out.values.resize(n + count);
  auto& g = out.values;
  const double lead = static_cast<double>(n) * sigma[n];
  for (std::size_t k = 0; k < count; ++k) {
    double acc = static_cast<double>(k + 1) * g[k];
    for (std::size_t m = 1; m < n; ++m)
      acc += static_cast<double>(m) * sigma[m] * g[k + m];
    g[k + n] = -acc / lead;
  }
  return out;
}

}  // namespace momentreg

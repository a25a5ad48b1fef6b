#include "momentreg/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace momentreg {

namespace {

constexpr double kMaxExponent = 700.0;

void check_dims(const DenseMatrix& A, std::span<const double> weights,
                std::size_t alpha_or_mu, const char* who) {
  if (weights.size() != A.cols || alpha_or_mu != A.rows)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// p~_j = w_j exp(e_j - 1), e = A^T alpha.
bool weighted_primal(std::span<const double> alpha, const DenseMatrix& A,
                     std::span<const double> weights, std::vector<double>& pw,
                     std::vector<double>* p = nullptr) {
  bool clamped = false;
  pw.assign(A.cols, 0.0);
  std::vector<double> e(A.cols, -1.0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    if (alpha[i] == 0.0) continue;
    const auto row = A.row(i);
    for (std::size_t j = 0; j < A.cols; ++j) e[j] += alpha[i] * row[j];
  }
  if (p) p->assign(A.cols, 0.0);
  for (std::size_t j = 0; j < A.cols; ++j) {
    if (e[j] > kMaxExponent) {
      e[j] = kMaxExponent;
      clamped = true;
    }
    const double v = std::exp(e[j]);
    pw[j] = weights[j] * v;
    if (p) (*p)[j] = v;
  }
  return clamped;
}

double row_dot(const DenseMatrix& A, std::size_t i, std::span<const double> v) {
  const auto row = A.row(i);
  double s = 0.0;
  for (std::size_t j = 0; j < A.cols; ++j) s += row[j] * v[j];
  return s;
}

double residual_norm(const DenseMatrix& A, std::span<const double> pw,
                     double scale, std::span<const double> mu) {
  double sq = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) {
    const double h = scale * row_dot(A, i, pw) - mu[i];
    sq += h * h;
  }
  return std::sqrt(sq);
}

std::vector<double> poly_mul(const std::vector<double>& l,
                             const std::vector<double>& r) {
  std::vector<double> out(l.size() + r.size() - 1, 0.0);
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) out[i + j] += l[i] * r[j];
  return out;
}

}  // namespace

std::size_t Basis::rows() const noexcept {
  return kind == BasisKind::trigonometric ? 2 * degree + 1 : degree + 1;
}

void Basis::evaluate(double x, std::span<double> out) const {
  const std::size_t R = rows();
  if (out.size() < R) throw std::invalid_argument("Basis::evaluate: short output");
  out[0] = 1.0;
  switch (kind) {
    case BasisKind::monomial:
      for (std::size_t i = 1; i < R; ++i) out[i] = out[i - 1] * x;
      break;
    case BasisKind::legendre: {
      const double s = 2.0 * (x - a) / (b - a) - 1.0;
      if (R > 1) out[1] = s;
      for (std::size_t n = 1; n + 1 < R; ++n) {
        const double dn = static_cast<double>(n);
        out[n + 1] = ((2.0 * dn + 1.0) * s * out[n] - dn * out[n - 1]) / (dn + 1.0);
      }
      break;
    }
    case BasisKind::trigonometric:
      for (std::size_t k = 1; k <= degree; ++k) {
        const double kx = static_cast<double>(k) * x;
        out[2 * k - 1] = std::cos(kx);
        out[2 * k] = std::sin(kx);
      }
      break;
  }
}

std::vector<double> Basis::evaluate(double x) const {
  std::vector<double> out(rows());
  evaluate(x, out);
  return out;
}

BasisMatrix make_basis_matrix(const Basis& basis, const Quadrature& quad) {
  BasisMatrix m{basis, DenseMatrix(basis.rows(), quad.size())};
  std::vector<double> col(basis.rows());
  for (std::size_t j = 0; j < quad.size(); ++j) {
    basis.evaluate(quad.nodes[j], col);
    for (std::size_t i = 0; i < col.size(); ++i) m.entries(i, j) = col[i];
  }
  return m;
}

Preconditioned precondition(const DenseMatrix& A, std::span<const double> mu,
                            double delta, bool alt_scaling) {
  if (!(delta > 0.0)) throw std::invalid_argument("precondition: delta must be > 0");
  if (mu.size() != A.rows) throw std::invalid_argument("precondition: dimension mismatch");
  Preconditioned out{DenseMatrix(A.rows, A.cols), std::vector<double>(A.rows), {}};
  auto& meta = out.meta;
  meta.delta = delta;
  meta.u.resize(A.rows);
  meta.M.resize(A.rows);
  meta.t.resize(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    const auto row = A.row(i);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    if (*lo == 0.0 && *hi == 0.0)
      throw std::invalid_argument("precondition: basis row is identically zero");
    const double u = -*lo + delta;
    const double M = u + *hi;
    double t = 1.0 / (M + delta);
    if (alt_scaling) t /= static_cast<double>(A.rows);
    meta.u[i] = u;
    meta.M[i] = M;
    meta.t[i] = t;
    for (std::size_t j = 0; j < A.cols; ++j) out.A(i, j) = t * (u + row[j]);
    out.mu[i] = t * (u + mu[i]);
  }
  return out;
}

PrimalValues primal_eval(std::span<const double> alpha, const DenseMatrix& A,
                         std::span<const double> weights) {
  check_dims(A, weights, alpha.size(), "primal_eval");
  PrimalValues out;
  out.clamped = weighted_primal(alpha, A, weights, out.p_weighted, &out.p);
  return out;
}

Residual constraint_residual(std::span<const double> alpha, const DenseMatrix& A,
                             std::span<const double> weights,
                             std::span<const double> mu) {
  check_dims(A, weights, alpha.size(), "constraint_residual");
  if (mu.size() != A.rows)
    throw std::invalid_argument("constraint_residual: dimension mismatch");
  std::vector<double> pw;
  weighted_primal(alpha, A, weights, pw);
  Residual r;
  r.h.resize(A.rows);
  double sq = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) {
    r.h[i] = row_dot(A, i, pw) - mu[i];
    sq += r.h[i] * r.h[i];
  }
  r.norm = std::sqrt(sq);
  return r;
}

double dual_objective(std::span<const double> alpha, const DenseMatrix& A,
                      std::span<const double> weights,
                      std::span<const double> mu) {
  check_dims(A, weights, alpha.size(), "dual_objective");
  std::vector<double> pw;
  weighted_primal(alpha, A, weights, pw);
  double obj = 0.0;
  for (double v : pw) obj += v;
  for (std::size_t i = 0; i < A.rows; ++i) obj -= mu[i] * alpha[i];
  return obj;
}

DualSolution fime_solve(const DenseMatrix& A, std::span<const double> weights,
                        std::span<const double> mu, const FimeOptions& options) {
  check_dims(A, weights, mu.size(), "fime_solve");
  if (A.rows == 0) throw std::invalid_argument("fime_solve: empty basis");
  if (!(mu[0] > 0.0)) throw std::invalid_argument("fime_solve: mu_0 must be > 0");
  for (double v : A.row(0))
    if (v != 1.0)
      throw std::invalid_argument("fime_solve: row 0 must be the constant 1");

  const std::size_t R = A.rows;
  const std::size_t K = A.cols;
  const double scale = mu[0];
  std::vector<double> mu_hat(mu.begin(), mu.end());
  for (double& v : mu_hat) v /= scale;

  Preconditioned cond;
  if (options.precondition) {
    cond = precondition(A, mu_hat, options.delta, options.alt_scaling);
  } else {
    cond.A = A;
    cond.mu = mu_hat;
    cond.meta.u.assign(R, 0.0);
    cond.meta.t.assign(R, 1.0);
  }
  for (double v : cond.mu)
    if (!(v > 0.0))
      throw std::invalid_argument(
          "fime_solve: conditioned moment is not positive");
  const DenseMatrix& Ac = cond.A;

  std::vector<double> alpha_c(R, 0.0);
  if (options.random_init_seed) {
    std::mt19937_64 rng(*options.random_init_seed);
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    for (double& v : alpha_c) v = dist(rng);
  }

  // Maps conditioned duals back to the original basis (row 0 is constant).
  auto unconditioned = [&](const std::vector<double>& ac) {
    std::vector<double> alpha(R);
    double offset = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
      alpha[i] = cond.meta.t[i] * ac[i];
      offset += cond.meta.t[i] * cond.meta.u[i] * ac[i];
    }
    alpha[0] += offset + std::log(scale);
    return alpha;
  };

  DualSolution sol;
  std::vector<double> pw;
  auto check = [&]() {
    sol.clamped = weighted_primal(alpha_c, Ac, weights, pw) || sol.clamped;
    // Unconditioned residual: the conditioned and original primals coincide.
    const auto alpha = unconditioned(alpha_c);
    std::vector<double> pw_orig;
    weighted_primal(alpha, A, weights, pw_orig);
    sol.residual_norm = residual_norm(A, pw_orig, 1.0, mu);
    if (options.record_history) {
      sol.residual_history.push_back(sol.residual_norm);
      double obj = 0.0;
      for (double v : pw) obj += v;
      for (std::size_t i = 0; i < R; ++i) obj -= cond.mu[i] * alpha_c[i];
      sol.objective_history.push_back(obj);
    }
    return sol.residual_norm < options.epsilon;
  };

  sol.converged = check();
  while (!sol.converged && sol.iterations < options.max_updates) {
    for (std::size_t i = 0; i < R && sol.iterations < options.max_updates; ++i) {
      const double s = row_dot(Ac, i, pw);
      const double lambda = std::log(cond.mu[i] / s);
      alpha_c[i] += lambda;
      const auto row = Ac.row(i);
      for (std::size_t j = 0; j < K; ++j) pw[j] *= std::exp(lambda * row[j]);
      ++sol.iterations;
    }
    sol.converged = check();
  }
  sol.alpha = unconditioned(alpha_c);
  return sol;
}

ExponentialDensity::ExponentialDensity(Basis basis, std::vector<double> alpha)
    : basis_(basis), alpha_(std::move(alpha)) {
  if (alpha_.size() != basis_.rows())
    throw std::invalid_argument("ExponentialDensity: alpha size != basis rows");
}

double ExponentialDensity::operator()(double x) const {
  const auto t = basis_.evaluate(x);
  double e = -1.0;
  for (std::size_t i = 0; i < t.size(); ++i) e += alpha_[i] * t[i];
  return std::exp(std::min(e, kMaxExponent));
}

std::vector<double> ExponentialDensity::exponent_coefficients() const {
  std::vector<double> c(basis_.degree + 1, 0.0);
  switch (basis_.kind) {
    case BasisKind::monomial:
      c = alpha_;
      break;
    case BasisKind::legendre: {
      const auto P = legendre_power_coefficients(basis_.a, basis_.b, basis_.degree);
      for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t k = 0; k < P[i].size(); ++k) c[k] += alpha_[i] * P[i][k];
      break;
    }
    case BasisKind::trigonometric:
      throw std::invalid_argument(
          "exponent_coefficients: trigonometric basis has no power form");
  }
  c[0] -= 1.0;
  return c;
}

MaxentResult solve_maxent(const Basis& basis, const Quadrature& quad,
                          std::span<const double> mu, const FimeOptions& options) {
  const BasisMatrix A = make_basis_matrix(basis, quad);
  DualSolution dual = fime_solve(A.entries, quad.weights, mu, options);
  ExponentialDensity density(basis, dual.alpha);
  return {std::move(dual), std::move(density), quad};
}

std::vector<std::vector<double>> legendre_power_coefficients(double a, double b,
                                                             std::size_t degree) {
  if (!(b > a)) throw std::invalid_argument("legendre_power_coefficients: need b > a");
  const std::vector<double> s{-(a + b) / (b - a), 2.0 / (b - a)};
  std::vector<std::vector<double>> P{{1.0}};
  if (degree >= 1) P.push_back(s);
  for (std::size_t n = 1; n < degree; ++n) {
    const double dn = static_cast<double>(n);
    auto next = poly_mul(s, P[n]);
    for (double& v : next) v *= (2.0 * dn + 1.0) / (dn + 1.0);
    for (std::size_t k = 0; k < P[n - 1].size(); ++k)
      next[k] -= dn / (dn + 1.0) * P[n - 1][k];
    P.push_back(std::move(next));
  }
  return P;
}

std::vector<double> basis_moments_from_power(const Basis& basis,
                                             std::span<const double> gamma) {
  if (gamma.size() < basis.degree + 1)
    throw std::invalid_argument("basis_moments_from_power: too few power moments");
  switch (basis.kind) {
    case BasisKind::monomial:
      return {gamma.begin(), gamma.begin() + static_cast<long>(basis.degree + 1)};
    case BasisKind::legendre: {
      const auto P = legendre_power_coefficients(basis.a, basis.b, basis.degree);
      std::vector<double> mu(P.size(), 0.0);
      for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t k = 0; k < P[i].size(); ++k) mu[i] += P[i][k] * gamma[k];
      return mu;
    }
    case BasisKind::trigonometric:
      break;
  }
  throw std::invalid_argument(
      "basis_moments_from_power: trigonometric basis needs trig moments");
}

}  // namespace momentreg

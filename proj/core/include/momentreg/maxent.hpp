#pragma once

// Discretized maximum-entropy problem and the cyclic dual solver (FIME).
//
// The primal density on quadrature nodes is p_j = exp[(A^T alpha)_j - 1];
// weighted values p~_j = w_j p_j give the moments A p~. Row 0 of every
// basis is the constant 1, which carries the mass constraint.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace momentreg {

enum class QuadratureRule { midpoint, gauss_legendre, periodic_trapezoid };

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

// Nodes/weights on [a, b]. periodic_trapezoid places K equispaced nodes
// a + (b-a) j / K, j = 0..K-1 (for a full period [a, b)).
Quadrature build_quadrature(double a, double b, std::size_t K,
                            QuadratureRule rule);

enum class BasisKind { monomial, legendre, trigonometric };

// Row functions T_0 = 1, T_1, ..., T_{rows-1}.
//  monomial:      T_i(x) = x^i                          rows = degree + 1
//  legendre:      T_i(x) = P_i(2(x-a)/(b-a) - 1)        rows = degree + 1
//  trigonometric: 1, cos x, sin x, cos 2x, sin 2x, ...  rows = 2 degree + 1
struct Basis {
  BasisKind kind = BasisKind::monomial;
  double a = 0.0;
  double b = 1.0;
  std::size_t degree = 0;

  std::size_t rows() const noexcept;
  void evaluate(double x, std::span<double> out) const;
  std::vector<double> evaluate(double x) const;
};

// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
};

struct BasisMatrix {
  Basis basis;
  DenseMatrix entries;  // a_ij = T_i(x_j)
};

BasisMatrix make_basis_matrix(const Basis& basis, const Quadrature& quad);

struct PreconditionMeta {
  std::vector<double> u;
  std::vector<double> M;
  std::vector<double> t;
  double delta = 1.0;
};

struct Preconditioned {
  DenseMatrix A;
  std::vector<double> mu;
  PreconditionMeta meta;
};

// u_i = -min_j a_ij + delta, M_i = max_j (u_i + a_ij),
// t_i = 1/(M_i + delta) (or 1/(rows (M_i + delta)) with alt_scaling),
// a'_ij = t_i (u_i + a_ij), mu'_i = t_i (u_i + mu_i).
// The equivalence A'p = mu' <=> Ap = mu needs mu_0 = 1 and row 0 == 1;
// fime_solve normalizes before calling this.
Preconditioned precondition(const DenseMatrix& A, std::span<const double> mu,
                            double delta, bool alt_scaling = false);

struct PrimalValues {
  std::vector<double> p;           // exp[(A^T alpha)_j - 1]
  std::vector<double> p_weighted;  // w_j p_j
  bool clamped = false;            // some exponent exceeded 700
};

PrimalValues primal_eval(std::span<const double> alpha, const DenseMatrix& A,
                         std::span<const double> weights);

struct Residual {
  std::vector<double> h;
  double norm = 0.0;
};

// h_i = [A p~(alpha)]_i - mu_i.
Residual constraint_residual(std::span<const double> alpha, const DenseMatrix& A,
                             std::span<const double> weights,
                             std::span<const double> mu);

// 1^T p~(alpha) - mu^T alpha. Convex in alpha, minimized at the solution.
double dual_objective(std::span<const double> alpha, const DenseMatrix& A,
                      std::span<const double> weights,
                      std::span<const double> mu);

struct FimeOptions {
  double epsilon = 1e-8;
  std::size_t max_updates = 100000;  // coordinate updates, not sweeps
  double delta = 1.0;
  bool alt_scaling = false;
  bool precondition = true;
  std::optional<std::uint64_t> random_init_seed;  // alpha^(0) = 0 otherwise
  bool record_history = false;
};

struct DualSolution {
  std::vector<double> alpha;  // unconditioned dual variables
  bool converged = false;
  std::size_t iterations = 0;  // coordinate updates performed
  double residual_norm = 0.0;
  bool clamped = false;
  // Per-sweep residual norm and dual objective (record_history only).
  std::vector<double> residual_history;
  std::vector<double> objective_history;
};

// Throws std::invalid_argument when mu_0 <= 0, a preconditioned moment is not
// positive, or dimensions disagree. Non-convergence is reported through
// DualSolution::converged.
DualSolution fime_solve(const DenseMatrix& A, std::span<const double> weights,
                        std::span<const double> mu,
                        const FimeOptions& options = {});

// p(x) = exp(sum_i alpha_i T_i(x) - 1), evaluable off the quadrature nodes.
class ExponentialDensity {
 public:
  ExponentialDensity(Basis basis, std::vector<double> alpha);

  double operator()(double x) const;
  const Basis& basis() const noexcept { return basis_; }
  std::span<const double> alpha() const noexcept { return alpha_; }

  // Coefficients c_k of the exponent sum_i alpha_i T_i(x) - 1 = sum_k c_k x^k
  // (monomial and Legendre bases only).
  std::vector<double> exponent_coefficients() const;

 private:
  Basis basis_;
  std::vector<double> alpha_;
};

struct MaxentResult {
  DualSolution dual;
  ExponentialDensity density;
  Quadrature quadrature;
};

// Solves for generalized moments mu_i = integral T_i p over [basis.a, basis.b].
MaxentResult solve_maxent(const Basis& basis, const Quadrature& quad,
                          std::span<const double> mu,
                          const FimeOptions& options = {});

// Power coefficients (in x) of the Legendre rows on [a, b]:
// result[i][k] is the coefficient of x^k in T_i(x).
std::vector<std::vector<double>> legendre_power_coefficients(double a, double b,
                                                             std::size_t degree);

// Generalized moments of `basis` (monomial or Legendre) from power moments
// gamma_0..gamma_degree.
std::vector<double> basis_moments_from_power(const Basis& basis,
                                             std::span<const double> gamma);

}  // namespace momentreg

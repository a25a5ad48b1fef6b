#pragma once

// Hilbert transforms on sampled phase functions and the boundary formulas
// that turn a phase back into a density.
//
// Line convention:   H f(x) = (1/pi) PV integral f(t) / (t - x) dt
// Circle convention: H f(theta) = (1/2pi) PV integral cot((s - theta)/2) f(s) ds
// Both act on e^{i n x} as the multiplier i sign(n), so H cos = -sin.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace momentreg {

enum class GridDomain { interval, circle };

// Interval grids are cell-centred: x_j = a + (j + 1/2) h, h = (b - a)/G.
// Circle grids are theta_j = -pi + 2 pi j / G on [-pi, pi).
// G must be a power of two.
struct GridFunction {
  GridDomain domain = GridDomain::interval;
  double a = 0.0;
  double b = 1.0;
  std::vector<double> values;

  static GridFunction interval(double a, double b, std::size_t G);
  static GridFunction circle(std::size_t G);

  std::size_t size() const noexcept { return values.size(); }
  double spacing() const noexcept;
  double node(std::size_t j) const noexcept;
  std::vector<double> nodes() const;
  // sum_j h f_j (midpoint / periodic trapezoid).
  double integral() const noexcept;

  // Throws std::invalid_argument unless the grid is well formed.
  void validate() const;
};

bool is_power_of_two(std::size_t n) noexcept;

enum class HilbertScheme {
  // Exact transform of the piecewise-constant interpolant, evaluated by
  // aperiodic FFT convolution. Right for data with jumps; first order on
  // smooth data.
  cell,
  // Sign multiplier on the zero-padded periodic FFT. Spectrally accurate
  // for smooth data, Gibbs-limited at jumps.
  spectral,
};

struct HilbertOptions {
  std::size_t pad_factor = 4;
  HilbertScheme scheme = HilbertScheme::cell;
};

GridFunction hilbert_line(const GridFunction& phi, const HilbertOptions& options = {});
GridFunction hilbert_circle(const GridFunction& phi);

struct Inversion {
  GridFunction density;
  double min_raw = 0.0;              // smallest value before clipping
  std::size_t clipped = 0;           // grid points clipped to zero
  bool negativity_flag = false;      // min_raw < -1e-8 (line) / < 0 (circle)
};

// rho = (1/pi) exp(pi H phi) sin(pi phi) for phi in [0, 1]. Throws
// std::domain_error when phi leaves [-1e-6, 1 + 1e-6].
Inversion invert_line(const GridFunction& phi_star, const HilbertOptions& options = {});

// rho = tau0 (2 exp(H phi) sin(phi) - 1) for phi in [0, pi]. Negative values
// are reported, not clipped. Throws std::invalid_argument for tau0 <= 0 and
// std::domain_error for phi outside [-1e-6, pi + 1e-6].
Inversion invert_circle(const GridFunction& phi_star, double tau0);

// f = exp(pi H xi) cos(pi xi) - 1: the average of the two boundary values
// of exp(C xi) minus one.
GridFunction cauchy_boundary_avg(const GridFunction& xi,
                                 const HilbertOptions& options = {});

struct RadonOptions {
  HilbertOptions hilbert{};
  // The slice is computed on a window this many times wider than the input
  // (zero-extended, centred on it); f decays only like 1/t.
  std::size_t extend = 8;
};

// R(t) = -(1/pi) H f(t), f = cauchy_boundary_avg(xi). The 1/t tail of f is
// removed analytically with a Lorentzian of the same mass and centre as xi
// before the finite-window transform. Returned on the grid of xi.
GridFunction radon_slice(const GridFunction& xi, const RadonOptions& options = {});

// Forward map from a density to its line phase:
// xi = (1/pi) arg(1 + pi H rho + i pi rho).
GridFunction phase_from_density(const GridFunction& rho,
                                const HilbertOptions& options = {});

// CSV form:
//   # schema=1
//   domain,<interval|circle>,<a>,<b>,<G>
//   x,value
//   <x_j>,<f_j>          (G rows, %.17g)
void write_grid_csv(std::ostream& out, const GridFunction& f);
GridFunction read_grid_csv(std::istream& in);

}  // namespace momentreg

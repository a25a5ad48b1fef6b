#pragma once

// Per-direction reduction of multivariate moments on the positive orthant:
// push-forward moments along y, their line phase moments, a 1D maxent fit of
// the phase, and the Radon slice R mu(y, t) = density of x . y at t.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "momentreg/conditioning.hpp"
#include "momentreg/maxent.hpp"
#include "momentreg/transform.hpp"

namespace momentreg {

class RayDirection {
 public:
  // Throws std::invalid_argument unless every component is > 0.
  explicit RayDirection(std::vector<double> y);

  std::size_t dimension() const noexcept { return y_.size(); }
  std::span<const double> components() const noexcept { return y_; }
  double operator[](std::size_t i) const { return y_[i]; }

 private:
  std::vector<double> y_;
};

// m_k = k! sum_{|alpha| = k} y^alpha / alpha! gamma_alpha, k = 0..n.
std::vector<double> pushforward_moments(const MultiMoments& gamma,
                                        const RayDirection& y, std::size_t n);

// c_j from 1 - sum m_k z^{-k-1} = exp(-sum c_j z^{-j-1}); c_0 = m_0.
std::vector<double> ray_phase_moments(std::span<const double> m);

struct RaySweepOptions {
  std::size_t grid = 1024;
  std::size_t quad_nodes = 401;
  FimeOptions fime{};
  bool clamp_phase = true;
  RadonOptions radon{};
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct RaySlice {
  RayDirection direction;
  std::vector<double> pushforward;    // m_0..m_n
  std::vector<double> phase_moments;  // c_0..c_n
  Interval window;                    // [lo, T] used for maxent and the grid
  bool rigorous_cutoff = false;       // T from a support box, not the heuristic
  DualSolution dual;
  double phase_max = 0.0;             // before clamping
  GridFunction phase;
  GridFunction radon;
};

// Phase window for a ray. With a support box, [y.a, y.b + gamma_0] contains
// the phase support exactly; otherwise [0, T] with
// T = c_1/c_0 + 6 sqrt(c_2/c_0).
Interval ray_window(const MultiMoments& gamma, const RayDirection& y,
                    std::span<const double> phase_moments, bool* rigorous = nullptr);

RaySlice reconstruct_ray(const MultiMoments& gamma, const RayDirection& y,
                         const RaySweepOptions& options = {});

// Runs reconstruct_ray for every direction on a thread pool; the result is
// ordered like `directions` regardless of scheduling. The first exception
// thrown by any ray is rethrown.
std::vector<RaySlice> ray_sweep(const MultiMoments& gamma,
                                std::span<const RayDirection> directions,
                                const RaySweepOptions& options = {});

}  // namespace momentreg

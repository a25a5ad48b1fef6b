#include "momentreg/raybeam.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace momentreg {

RayDirection::RayDirection(std::vector<double> y) : y_(std::move(y)) {
  if (y_.empty()) throw std::invalid_argument("RayDirection: empty vector");
  for (double v : y_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "RayDirection: components must be positive (open orthant)");
}

std::vector<double> pushforward_moments(const MultiMoments& gamma,
                                        const RayDirection& y, std::size_t n) {
  if (y.dimension() != gamma.dimension)
    throw std::invalid_argument("pushforward_moments: dimension mismatch");
  if (n > gamma.order)
    throw std::invalid_argument(
        "pushforward_moments: moments missing above total degree " +
        std::to_string(gamma.order));
  const auto ix = IndexSet::get(gamma.dimension, gamma.order);
  if (gamma.values.size() != ix->size())
    throw std::invalid_argument("pushforward_moments: value count mismatch");

  std::vector<double> m(n + 1, 0.0);
  for (std::size_t p = 0; p < ix->degree_begin(n + 1); ++p) {
    const MultiIndex& alpha = (*ix)[p];
    double mono = 1.0;
    for (std::size_t i = 0; i < alpha.dimension(); ++i)
      mono *= std::pow(y[i], static_cast<double>(alpha[i]));
    // k! y^alpha / alpha! = multinomial(alpha) y^alpha
    m[alpha.total_degree()] += alpha.multinomial() * mono * gamma.values[p];
  }
  return m;
}

std::vector<double> ray_phase_moments(std::span<const double> m) {
  if (m.empty() || !(m[0] > 0.0))
    throw std::invalid_argument("ray_phase_moments: m_0 must be positive");
  return condition_line(PowerMoments{{m.begin(), m.end()}, HalfLine{}}).values;
}

Interval ray_window(const MultiMoments& gamma, const RayDirection& y,
                    std::span<const double> c, bool* rigorous) {
  if (gamma.box) {
    if (gamma.box->size() != y.dimension())
      throw std::invalid_argument("ray_window: support box dimension mismatch");
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < y.dimension(); ++i) {
      lo += y[i] * (*gamma.box)[i].a;
      hi += y[i] * (*gamma.box)[i].b;
    }
    if (rigorous) *rigorous = true;
    return {lo, hi + gamma.total_mass};
  }
  if (c.size() < 3)
    throw std::invalid_argument(
        "ray_window: heuristic cutoff needs phase moments up to order 2");
  if (rigorous) *rigorous = false;
  const double T = c[1] / c[0] + 6.0 * std::sqrt(std::max(c[2] / c[0], 0.0));
  return {0.0, T};
}

RaySlice reconstruct_ray(const MultiMoments& gamma, const RayDirection& y,
                         const RaySweepOptions& options) {
  const std::size_t n = gamma.order;
  auto m = pushforward_moments(gamma, y, n);
  auto c = ray_phase_moments(m);
  bool rigorous = false;
  const Interval window = ray_window(gamma, y, c, &rigorous);

  const Basis basis{BasisKind::legendre, window.a, window.b, n};
  const Quadrature quad = build_quadrature(window.a, window.b, options.quad_nodes,
                                           QuadratureRule::gauss_legendre);
  const auto mu = basis_moments_from_power(basis, c);
  MaxentResult fit = solve_maxent(basis, quad, mu, options.fime);

  GridFunction phase = GridFunction::interval(window.a, window.b, options.grid);
  double phase_max = 0.0;
  for (std::size_t j = 0; j < phase.size(); ++j) {
    const double v = fit.density(phase.node(j));
    phase_max = std::max(phase_max, v);
    phase.values[j] = options.clamp_phase ? std::clamp(v, 0.0, 1.0) : v;
  }
  GridFunction radon = radon_slice(phase, options.radon);

  return RaySlice{y,         std::move(m),    std::move(c),     window,
                  rigorous,  std::move(fit.dual), phase_max, std::move(phase),
                  std::move(radon)};
}

std::vector<RaySlice> ray_sweep(const MultiMoments& gamma,
                                std::span<const RayDirection> directions,
                                const RaySweepOptions& options) {
  const std::size_t count = directions.size();
  std::vector<std::optional<RaySlice>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(reconstruct_ray(gamma, directions[i], options));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<RaySlice> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace momentreg

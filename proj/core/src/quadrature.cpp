#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "momentreg/maxent.hpp"

namespace momentreg {

Quadrature build_quadrature(double a, double b, std::size_t K,
                            QuadratureRule rule) {
  if (K < 2) throw std::invalid_argument("build_quadrature: need K >= 2");
  if (!(b > a)) throw std::invalid_argument("build_quadrature: need b > a");
  Quadrature q;
  q.nodes.resize(K);
  q.weights.resize(K);
  const double h = (b - a) / static_cast<double>(K);

  switch (rule) {
    case QuadratureRule::midpoint:
      for (std::size_t j = 0; j < K; ++j) {
        q.nodes[j] = a + (static_cast<double>(j) + 0.5) * h;
        q.weights[j] = h;
      }
      break;
    case QuadratureRule::periodic_trapezoid:
      for (std::size_t j = 0; j < K; ++j) {
        q.nodes[j] = a + static_cast<double>(j) * h;
        q.weights[j] = h;
      }
      break;
    case QuadratureRule::gauss_legendre: {
      // legendre_p_zeros returns the non-negative roots in increasing order.
      const int n = static_cast<int>(K);
      const auto zeros = boost::math::legendre_p_zeros<double>(n);
      std::vector<double> s;
      std::vector<double> w;
      for (double z : zeros) {
        const double dp = boost::math::legendre_p_prime<double>(n, z);
        const double wz = 2.0 / ((1.0 - z * z) * dp * dp);
        if (z == 0.0) {
          s.push_back(0.0);
          w.push_back(wz);
        } else {
          s.push_back(z);
          w.push_back(wz);
          s.push_back(-z);
          w.push_back(wz);
        }
      }
      std::vector<std::size_t> order(s.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t l, std::size_t r) { return s[l] < s[r]; });
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (std::size_t j = 0; j < K; ++j) {
        q.nodes[j] = mid + half * s[order[j]];
        q.weights[j] = half * w[order[j]];
      }
      break;
    }
  }
  return q;
}

}  // namespace momentreg

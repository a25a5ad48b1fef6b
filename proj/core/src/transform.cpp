#include "momentreg/transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fft.hpp"

namespace momentreg {

namespace {

using std::numbers::pi;
constexpr double kRangeTol = 1e-6;

GridFunction like(const GridFunction& f) {
  GridFunction g = f;
  std::fill(g.values.begin(), g.values.end(), 0.0);
  return g;
}

void require_interval(const GridFunction& f, const char* who) {
  f.validate();
  if (f.domain != GridDomain::interval)
    throw std::invalid_argument(std::string(who) + ": needs an interval grid");
}

void require_range(const GridFunction& f, double hi, const char* who) {
  for (double v : f.values)
    if (!(v >= -kRangeTol && v <= hi + kRangeTol))
      throw std::domain_error(std::string(who) + ": phase value " +
                              std::to_string(v) + " outside [0, " +
                              std::to_string(hi) + "]");
}

// Multiplies the non-negative half spectrum by i sign(k), zeroing the mean
// and Nyquist modes.
void apply_sign_multiplier(std::vector<std::complex<double>>& X, std::size_t n) {
  const std::complex<double> i{0.0, 1.0};
  X[0] = 0.0;
  for (std::size_t k = 1; k < X.size(); ++k) X[k] *= i;
  if (n % 2 == 0) X[n / 2] = 0.0;
}

std::vector<double> hilbert_cell(std::span<const double> f, std::size_t pad) {
  const std::size_t G = f.size();
  const std::size_t L = std::max<std::size_t>(pad, 2) * G;
  // H f_i = sum_j K(j - i) f_j, K(m) = (1/pi) ln|(m + 1/2)/(m - 1/2)|.
  // As a convolution f * k with k[m] = K(-m) = -K(m).
  std::vector<double> kernel(L, 0.0);
  for (std::size_t m = 1; m < G; ++m) {
    const double dm = static_cast<double>(m);
    const double K = std::log((dm + 0.5) / (dm - 0.5)) / pi;
    kernel[m] = -K;
    kernel[L - m] = K;
  }
  std::vector<double> padded(L, 0.0);
  std::copy(f.begin(), f.end(), padded.begin());
  auto F = detail::rfft(padded);
  const auto Kf = detail::rfft(kernel);
  for (std::size_t k = 0; k < F.size(); ++k) F[k] *= Kf[k];
  auto out = detail::irfft(F, L);
  out.resize(G);
  return out;
}

std::vector<double> hilbert_spectral(std::span<const double> f, std::size_t pad) {
  const std::size_t G = f.size();
  const std::size_t L = std::max<std::size_t>(pad, 1) * G;
  std::vector<double> padded(L, 0.0);
  std::copy(f.begin(), f.end(), padded.begin());
  auto F = detail::rfft(padded);
  apply_sign_multiplier(F, L);
  auto out = detail::irfft(F, L);
  out.resize(G);
  return out;
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

GridFunction GridFunction::interval(double a, double b, std::size_t G) {
  GridFunction f{GridDomain::interval, a, b, std::vector<double>(G, 0.0)};
  f.validate();
  return f;
}

GridFunction GridFunction::circle(std::size_t G) {
  GridFunction f{GridDomain::circle, -pi, pi, std::vector<double>(G, 0.0)};
  f.validate();
  return f;
}

double GridFunction::spacing() const noexcept {
  return (b - a) / static_cast<double>(values.size());
}

double GridFunction::node(std::size_t j) const noexcept {
  const double offset = domain == GridDomain::interval ? 0.5 : 0.0;
  return a + (static_cast<double>(j) + offset) * spacing();
}

std::vector<double> GridFunction::nodes() const {
  std::vector<double> x(size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = node(j);
  return x;
}

double GridFunction::integral() const noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s * spacing();
}

void GridFunction::validate() const {
  if (!is_power_of_two(values.size()))
    throw std::invalid_argument("GridFunction: grid size must be a power of two");
  if (!(b > a)) throw std::invalid_argument("GridFunction: need b > a");
  if (domain == GridDomain::circle && (a != -pi || b != pi))
    throw std::invalid_argument("GridFunction: circle grids cover [-pi, pi)");
}

GridFunction hilbert_line(const GridFunction& phi, const HilbertOptions& options) {
  require_interval(phi, "hilbert_line");
  if (options.pad_factor < 1)
    throw std::invalid_argument("hilbert_line: pad_factor must be >= 1");
  GridFunction out = like(phi);
  out.values = options.scheme == HilbertScheme::cell
                   ? hilbert_cell(phi.values, options.pad_factor)
                   : hilbert_spectral(phi.values, options.pad_factor);
  return out;
}

GridFunction hilbert_circle(const GridFunction& phi) {
  phi.validate();
  if (phi.domain != GridDomain::circle)
    throw std::invalid_argument("hilbert_circle: needs a circle grid");
  auto F = detail::rfft(phi.values);
  apply_sign_multiplier(F, phi.size());
  GridFunction out = like(phi);
  out.values = detail::irfft(F, phi.size());
  return out;
}

Inversion invert_line(const GridFunction& phi_star, const HilbertOptions& options) {
  require_interval(phi_star, "invert_line");
  require_range(phi_star, 1.0, "invert_line");
  const GridFunction H = hilbert_line(phi_star, options);
  Inversion r{like(phi_star)};
  r.min_raw = 0.0;
  for (std::size_t j = 0; j < phi_star.size(); ++j) {
    double v = std::exp(pi * H.values[j]) * std::sin(pi * phi_star.values[j]) / pi;
    r.min_raw = std::min(r.min_raw, v);
    if (v < 0.0) {
      v = 0.0;
      ++r.clipped;
    }
    r.density.values[j] = v;
  }
  r.negativity_flag = r.min_raw < -1e-8;
  return r;
}

Inversion invert_circle(const GridFunction& phi_star, double tau0) {
  if (!(tau0 > 0.0)) throw std::invalid_argument("invert_circle: tau0 must be > 0");
  phi_star.validate();
  if (phi_star.domain != GridDomain::circle)
    throw std::invalid_argument("invert_circle: needs a circle grid");
  require_range(phi_star, pi, "invert_circle");
  const GridFunction H = hilbert_circle(phi_star);
  Inversion r{like(phi_star)};
  r.min_raw = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < phi_star.size(); ++j) {
    const double v =
        tau0 * (2.0 * std::exp(H.values[j]) * std::sin(phi_star.values[j]) - 1.0);
    r.min_raw = std::min(r.min_raw, v);
    if (v < 0.0) ++r.clipped;
    r.density.values[j] = v;
  }
  r.negativity_flag = r.min_raw < 0.0;
  return r;
}

GridFunction cauchy_boundary_avg(const GridFunction& xi, const HilbertOptions& options) {
  require_interval(xi, "cauchy_boundary_avg");
  require_range(xi, 1.0, "cauchy_boundary_avg");
  const GridFunction H = hilbert_line(xi, options);
  GridFunction f = like(xi);
  for (std::size_t j = 0; j < xi.size(); ++j)
    f.values[j] = std::exp(pi * H.values[j]) * std::cos(pi * xi.values[j]) - 1.0;
  return f;
}

GridFunction radon_slice(const GridFunction& xi, const RadonOptions& options) {
  require_interval(xi, "radon_slice");
  require_range(xi, 1.0, "radon_slice");
  if (!is_power_of_two(options.extend))
    throw std::invalid_argument("radon_slice: extend must be a power of two");

  const std::size_t G = xi.size();
  const std::size_t Ge = options.extend * G;
  const std::size_t offset = (Ge - G) / 2;
  const double h = xi.spacing();
  GridFunction wide = GridFunction::interval(
      xi.a - static_cast<double>(offset) * h,
      xi.b + static_cast<double>(Ge - G - offset) * h, Ge);
  std::copy(xi.values.begin(), xi.values.end(),
            wide.values.begin() + static_cast<long>(offset));

  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < G; ++j) {
    const double x = xi.node(j);
    m0 += h * xi.values[j];
    m1 += h * x * xi.values[j];
    m2 += h * x * x * xi.values[j];
  }
  GridFunction out = like(xi);
  if (m0 <= 0.0) return out;
  const double c = m1 / m0;
  const double sigma = std::max(std::sqrt(std::max(m2 / m0 - c * c, 0.0)), 4.0 * h);

  GridFunction g = cauchy_boundary_avg(wide, options.hilbert);
  for (std::size_t j = 0; j < Ge; ++j) {
    const double d = wide.node(j) - c;
    g.values[j] -= m0 * (-d) / (d * d + sigma * sigma);
  }
  const GridFunction Hg = hilbert_line(g, options.hilbert);
  for (std::size_t j = 0; j < G; ++j) {
    const double d = xi.node(j) - c;
    const double lorentz = sigma / (pi * (d * d + sigma * sigma));
    out.values[j] = m0 * lorentz - Hg.values[j + offset] / pi;
  }
  return out;
}

GridFunction phase_from_density(const GridFunction& rho, const HilbertOptions& options) {
  require_interval(rho, "phase_from_density");
  const GridFunction H = hilbert_line(rho, options);
  GridFunction xi = like(rho);
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double r = std::max(rho.values[j], 0.0) + 0.0;
    xi.values[j] = std::atan2(pi * r, 1.0 + pi * H.values[j]) / pi;
  }
  return xi;
}

namespace {

void append_double(std::string& line, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("grid CSV: bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridFunction& f) {
  f.validate();
  std::string line = "# schema=1\ndomain,";
  line += f.domain == GridDomain::interval ? "interval," : "circle,";
  append_double(line, f.a);
  line += ',';
  append_double(line, f.b);
  line += ',' + std::to_string(f.size()) + "\nx,value\n";
  out << line;
  for (std::size_t j = 0; j < f.size(); ++j) {
    line.clear();
    append_double(line, f.node(j));
    line += ',';
    append_double(line, f.values[j]);
    line += '\n';
    out << line;
  }
}

GridFunction read_grid_csv(std::istream& in) {
  std::string line;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.starts_with('#')) continue;
      return true;
    }
    return false;
  };
  if (!next()) throw std::invalid_argument("grid CSV: empty input");
  const auto head = split(line);
  if (head.size() != 5 || head[0] != "domain")
    throw std::invalid_argument("grid CSV: expected 'domain,<kind>,a,b,G' header");
  GridFunction f;
  if (head[1] == "interval")
    f.domain = GridDomain::interval;
  else if (head[1] == "circle")
    f.domain = GridDomain::circle;
  else
    throw std::invalid_argument("grid CSV: unknown domain '" + std::string(head[1]) + "'");
  f.a = parse_double(head[2]);
  f.b = parse_double(head[3]);
  const auto G = static_cast<std::size_t>(parse_double(head[4]));
  if (!next() || line != "x,value")
    throw std::invalid_argument("grid CSV: expected 'x,value' column header");
  f.values.reserve(G);
  while (next()) {
    const auto cols = split(line);
    if (cols.size() != 2) throw std::invalid_argument("grid CSV: expected two columns");
    f.values.push_back(parse_double(cols[1]));
  }
  if (f.values.size() != G)
    throw std::invalid_argument("grid CSV: row count does not match G");
  f.validate();
  return f;
}

}  // namespace momentreg

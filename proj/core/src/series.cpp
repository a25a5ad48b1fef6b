#include "momentreg/series.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace momentreg {

MultiIndex::MultiIndex(std::vector<unsigned> entries)
    : entries_(std::move(entries)),
      degree_(std::accumulate(entries_.begin(), entries_.end(), 0u)) {}

MultiIndex::MultiIndex(std::initializer_list<unsigned> entries)
    : MultiIndex(std::vector<unsigned>(entries)) {}

MultiIndex MultiIndex::zero(std::size_t dimension) {
  return MultiIndex(std::vector<unsigned>(dimension, 0u));
}

bool MultiIndex::dominated_by(const MultiIndex& other) const {
  if (other.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] > other.entries_[i]) return false;
  return true;
}

double MultiIndex::multinomial() const noexcept {
  double result = 1.0;
  unsigned running = 0;
  for (unsigned v : entries_)
    for (unsigned j = 1; j <= v; ++j) {
      ++running;
      result = result * running / j;
    }
  return result;
}

namespace {

constexpr double kMaxKeySpace = 1e7;

// Appends all compositions of `remaining` into entries [pos, d), leading
// entry descending.
void enumerate(std::vector<unsigned>& scratch, std::size_t pos,
               unsigned remaining, std::vector<MultiIndex>& out) {
  if (pos + 1 == scratch.size()) {
    scratch[pos] = remaining;
    out.emplace_back(scratch);
    return;
  }
  for (unsigned v = remaining + 1; v-- > 0;) {
    scratch[pos] = v;
    enumerate(scratch, pos + 1, remaining - v, out);
  }
}

}  // namespace

IndexSet::IndexSet(std::size_t dimension, std::size_t order)
    : dimension_(dimension), order_(order) {
  std::vector<unsigned> scratch(dimension, 0u);
  for (std::size_t deg = 0; deg <= order; ++deg) {
    degree_offsets_.push_back(indices_.size());
    enumerate(scratch, 0, static_cast<unsigned>(deg), indices_);
  }
  degree_offsets_.push_back(indices_.size());

  std::size_t space = 1;
  for (std::size_t m = 0; m < dimension; ++m) space *= order + 1;
  key_to_position_.assign(space, -1);
  keys_.reserve(indices_.size());
  for (std::size_t pos = 0; pos < indices_.size(); ++pos) {
    std::size_t key = 0;
    std::size_t radix = 1;
    for (std::size_t m = 0; m < dimension; ++m) {
      key += indices_[pos][m] * radix;
      radix *= order + 1;
    }
    keys_.push_back(key);
    key_to_position_[key] = static_cast<long>(pos);
  }
}

std::shared_ptr<const IndexSet> IndexSet::get(std::size_t dimension,
                                              std::size_t order) {
  if (dimension == 0)
    throw std::invalid_argument("IndexSet: dimension must be positive");
  double space = 1.0;
  for (std::size_t m = 0; m < dimension; ++m)
    space *= static_cast<double>(order + 1);
  if (space > kMaxKeySpace)
    throw std::invalid_argument("IndexSet: (order+1)^dimension = " +
                                std::to_string(space) + " is too large");

  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>,
                  std::shared_ptr<const IndexSet>>
      cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, order}];
  if (!slot) slot.reset(new IndexSet(dimension, order));
  return slot;
}

std::size_t IndexSet::degree_begin(std::size_t degree) const {
  return degree > order_ ? indices_.size() : degree_offsets_[degree];
}

std::optional<std::size_t> IndexSet::position(const MultiIndex& index) const {
  if (index.dimension() != dimension_ || index.total_degree() > order_)
    return std::nullopt;
  std::size_t key = 0;
  std::size_t radix = 1;
  for (std::size_t m = 0; m < dimension_; ++m) {
    key += index[m] * radix;
    radix *= order_ + 1;
  }
  return static_cast<std::size_t>(key_to_position_[key]);
}

long IndexSet::position_of_key(std::size_t key) const {
  return key < key_to_position_.size() ? key_to_position_[key] : -1;
}

FormalSeries::FormalSeries(std::size_t dimension, std::size_t order)
    : indices_(IndexSet::get(dimension, order)),
      coeffs_(indices_->size(), Complex{}) {}

FormalSeries FormalSeries::constant(std::size_t dimension, std::size_t order,
                                    Complex value) {
  FormalSeries s(dimension, order);
  s.coeffs_[0] = value;
  return s;
}

FormalSeries FormalSeries::univariate(std::span<const Complex> coeffs,
                                      std::size_t order) {
  FormalSeries s(1, order);
  for (std::size_t n = 0; n < coeffs.size() && n <= order; ++n)
    s.coeffs_[n] = coeffs[n];
  return s;
}

FormalSeries FormalSeries::univariate(std::span<const double> coeffs,
                                      std::size_t order) {
  FormalSeries s(1, order);
  for (std::size_t n = 0; n < coeffs.size() && n <= order; ++n)
    s.coeffs_[n] = coeffs[n];
  return s;
}

Complex FormalSeries::coefficient(const MultiIndex& index) const {
  if (index.dimension() != dimension())
    throw std::invalid_argument("FormalSeries: index dimension mismatch");
  auto pos = indices_->position(index);
  return pos ? coeffs_[*pos] : Complex{};
}

void FormalSeries::set(const MultiIndex& index, Complex value) {
  if (index.dimension() != dimension())
    throw std::invalid_argument("FormalSeries: index dimension mismatch");
  auto pos = indices_->position(index);
  if (!pos)
    throw std::invalid_argument("FormalSeries: index above truncation order");
  coeffs_[*pos] = value;
}

FormalSeries FormalSeries::truncated(std::size_t new_order) const {
  FormalSeries out(dimension(), new_order);
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    auto src = indices_->position(out.indices()[pos]);
    if (src) out.coeffs_[pos] = coeffs_[*src];
  }
  return out;
}

void FormalSeries::check_same_shape(const FormalSeries& other) const {
  if (indices_ != other.indices_)
    throw std::invalid_argument(
        "FormalSeries: operands differ in dimension or order");
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& rhs) {
  check_same_shape(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& rhs) {
  check_same_shape(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

FormalSeries& FormalSeries::operator*=(Complex scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

FormalSeries operator*(const FormalSeries& lhs, const FormalSeries& rhs) {
  lhs.check_same_shape(rhs);
  const IndexSet& ix = lhs.indices();
  const std::size_t order = ix.order();
  FormalSeries out(lhs.dimension(), order);
  for (std::size_t p = 0; p < ix.size(); ++p) {
    const Complex a = lhs[p];
    if (a == Complex{}) continue;
    const std::size_t room = order - ix[p].total_degree();
    const std::size_t end = ix.degree_begin(room + 1);
    for (std::size_t q = 0; q < end; ++q) {
      const Complex b = rhs[q];
      if (b == Complex{}) continue;
      out[static_cast<std::size_t>(ix.position_of_key(ix.key(p) + ix.key(q)))] +=
          a * b;
    }
  }
  return out;
}

namespace {

Complex int_pow(Complex base, long k) {
  Complex result{1.0, 0.0};
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

void require_zero_free_term(const FormalSeries& s, const char* who) {
  if (s.free_term() != Complex{})
    throw std::invalid_argument(std::string(who) +
                                ": series must have zero free term");
}

}  // namespace

FormalSeries series_pow(const FormalSeries& a, long k) {
  if (k < 0) throw std::invalid_argument("series_pow: negative exponent");
  const Complex a0 = a.free_term();
  if (a0 == Complex{})
    throw std::invalid_argument(
        "series_pow: zero free term (use series_pow_zero_free)");

  const IndexSet& ix = a.indices();
  const std::size_t d = ix.dimension();
  FormalSeries b(d, ix.order());
  b[0] = int_pow(a0, k);
  const double kp1 = static_cast<double>(k) + 1.0;

  for (std::size_t m = 1; m < ix.size(); ++m) {
    const MultiIndex& mu = ix[m];
    double support = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      if (mu[i] != 0) support += 1.0;

    Complex acc{};
    const std::size_t end = ix.degree_begin(mu.total_degree() + 1);
    for (std::size_t g = 1; g < end; ++g) {
      const MultiIndex& gamma = ix[g];
      if (a[g] == Complex{} || !gamma.dominated_by(mu)) continue;
      double ratio = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        if (mu[i] != 0) ratio += static_cast<double>(gamma[i]) / mu[i];
      const auto rest = ix.position_of_key(ix.key(m) - ix.key(g));
      acc += (kp1 * ratio / support - 1.0) * a[g] *
             b[static_cast<std::size_t>(rest)];
    }
    b[m] = acc / a0;
  }
  return b;
}

FormalSeries series_pow_zero_free(const FormalSeries& s, long k) {
  if (k < 0)
    throw std::invalid_argument("series_pow_zero_free: negative exponent");
  require_zero_free_term(s, "series_pow_zero_free");
  FormalSeries shifted = s;
  shifted[0] = 1.0;
  FormalSeries out(s.dimension(), s.order());
  double binom = 1.0;  // C(k, j)
  for (long j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    out += series_pow(shifted, j) * Complex(sign * binom);
    binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
  }
  return out;
}

FormalSeries accumulate_powers(const FormalSeries& s,
                               std::span<const Complex> weights) {
  require_zero_free_term(s, "accumulate_powers");
  FormalSeries out(s.dimension(), s.order());
  // S^k vanishes identically once k exceeds the truncation order.
  const std::size_t kmax = std::min(weights.size(), s.order());
  FormalSeries power = s;
  for (std::size_t k = 1; k <= kmax; ++k) {
    if (k > 1) power = power * s;
    out += power * weights[k - 1];
  }
  return out;
}

FormalSeries series_exp(const FormalSeries& s) {
  require_zero_free_term(s, "series_exp");
  std::vector<Complex> weights(s.order());
  double inv_factorial = 1.0;
  for (std::size_t k = 1; k <= weights.size(); ++k) {
    inv_factorial /= static_cast<double>(k);
    weights[k - 1] = inv_factorial;
  }
  FormalSeries out = accumulate_powers(s, weights);
  out[0] += 1.0;
  return out;
}

std::vector<Complex> log_one_minus_weights(std::size_t count) {
  std::vector<Complex> w(count);
  for (std::size_t k = 1; k <= count; ++k) w[k - 1] = 1.0 / static_cast<double>(k);
  return w;
}

std::vector<Complex> log_one_plus_weights(std::size_t count) {
  std::vector<Complex> w(count);
  for (std::size_t k = 1; k <= count; ++k)
    w[k - 1] = (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k);
  return w;
}

}  // namespace momentreg

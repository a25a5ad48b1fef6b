#pragma once

// Truncated multivariate formal power series with complex coefficients.
//
// Coefficients are stored densely for every multi-index of total degree
// <= order, in graded-lexicographic order: first by total degree, then
// lexicographically descending in the leading entry, e.g. for d = 2:
//   (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
// Every recursion in this header only reads coefficients of lower or equal
// total degree, so truncating an input never changes lower-degree outputs.

#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace momentreg {

using Complex = std::complex<double>;

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> entries);
  MultiIndex(std::initializer_list<unsigned> entries);

  static MultiIndex zero(std::size_t dimension);

  std::size_t dimension() const noexcept { return entries_.size(); }
  unsigned total_degree() const noexcept { return degree_; }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  std::span<const unsigned> entries() const noexcept { return entries_; }

  // Componentwise <=.
  bool dominated_by(const MultiIndex& other) const;
  // |alpha|! / alpha!
  double multinomial() const noexcept;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> entries_;
  unsigned degree_ = 0;
};

// All multi-indices of a fixed dimension with total degree <= order.
// Instances are immutable and shared between series of the same shape.
class IndexSet {
 public:
  static std::shared_ptr<const IndexSet> get(std::size_t dimension,
                                             std::size_t order);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& operator[](std::size_t pos) const { return indices_[pos]; }

  // Position of the first index with total degree `degree` (size() when
  // degree > order).
  std::size_t degree_begin(std::size_t degree) const;

  std::optional<std::size_t> position(const MultiIndex& index) const;

  // Mixed-radix key (base order+1). Keys are additive: key(a + b) =
  // key(a) + key(b) whenever a + b stays within the order.
  std::size_t key(std::size_t pos) const { return keys_[pos]; }
  // Position for a key, or -1 when the key is not a stored index.
  long position_of_key(std::size_t key) const;

 private:
  IndexSet(std::size_t dimension, std::size_t order);

  std::size_t dimension_;
  std::size_t order_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_offsets_;
  std::vector<std::size_t> keys_;
  std::vector<long> key_to_position_;
};

class FormalSeries {
 public:
  FormalSeries(std::size_t dimension, std::size_t order);

  static FormalSeries constant(std::size_t dimension, std::size_t order,
                               Complex value);
  // coeffs[n] is the coefficient of z^n; entries beyond `order` are dropped.
  static FormalSeries univariate(std::span<const Complex> coeffs,
                                 std::size_t order);
  static FormalSeries univariate(std::span<const double> coeffs,
                                 std::size_t order);

  std::size_t dimension() const noexcept { return indices_->dimension(); }
  std::size_t order() const noexcept { return indices_->order(); }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const IndexSet& indices() const noexcept { return *indices_; }

  // Zero for indices above the truncation order.
  Complex coefficient(const MultiIndex& index) const;
  void set(const MultiIndex& index, Complex value);

  Complex& operator[](std::size_t pos) { return coeffs_[pos]; }
  const Complex& operator[](std::size_t pos) const { return coeffs_[pos]; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  std::span<Complex> coefficients() noexcept { return coeffs_; }

  Complex free_term() const { return coeffs_.front(); }

  FormalSeries truncated(std::size_t new_order) const;

  FormalSeries& operator+=(const FormalSeries& rhs);
  FormalSeries& operator-=(const FormalSeries& rhs);
  FormalSeries& operator*=(Complex scalar);

  friend FormalSeries operator+(FormalSeries lhs, const FormalSeries& rhs) {
    return lhs += rhs;
  }
  friend FormalSeries operator-(FormalSeries lhs, const FormalSeries& rhs) {
    return lhs -= rhs;
  }
  friend FormalSeries operator*(FormalSeries lhs, Complex scalar) {
    return lhs *= scalar;
  }
  // Truncated Cauchy product.
  friend FormalSeries operator*(const FormalSeries& lhs,
                                const FormalSeries& rhs);

 private:
  void check_same_shape(const FormalSeries& other) const;

  std::shared_ptr<const IndexSet> indices_;
  std::vector<Complex> coeffs_;
};

// A^k by the Miller-Nakos recursion
//   b_0 = a_0^k,
//   b_mu = (1/a_0) sum_{0 < g <= mu} [(k+1)|g/mu| / |mu/mu| - 1] a_g b_{mu-g},
// with |a/b| = sum of a_i/b_i over the positions where b_i != 0.
// Throws std::invalid_argument for a zero free term or negative k.
FormalSeries series_pow(const FormalSeries& a, long k);

// S^k for S without free term, through the binomial expansion
// [(S+1) - 1]^k = sum_j C(k,j) (-1)^(k-j) (S+1)^j. The alternating sum
// cancels large intermediate coefficients, so prefer accumulate_powers()
// when S has coefficients of magnitude >~ 1 and k is large.
FormalSeries series_pow_zero_free(const FormalSeries& s, long k);

// sum_{k=1}^{K} w_k S^k, K = weights.size(), for S without free term.
FormalSeries accumulate_powers(const FormalSeries& s,
                               std::span<const Complex> weights);

// exp(S) = sum_{k=0}^{order} S^k / k! for S without free term.
FormalSeries series_exp(const FormalSeries& s);

// Weights w_k = 1/k (k = 1..count): accumulate_powers gives -log(1 - S).
std::vector<Complex> log_one_minus_weights(std::size_t count);
// Weights w_k = (-1)^(k+1)/k: accumulate_powers gives log(1 + S).
std::vector<Complex> log_one_plus_weights(std::size_t count);

}  // namespace momentreg

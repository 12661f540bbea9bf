#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "k3ks/error.hpp"
#include "k3ks/matrix.hpp"
#include "k3ks/rational.hpp"

namespace k3ks {

using Mask = std::uint32_t;

struct RationalRing {
  using value_type = Rational;
  value_type zero() const { return Rational(0); }
  value_type one() const { return Rational(1); }
  value_type from_rational(const Rational& q) const { return q; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const { return 1 / a; }
  bool is_zero(const value_type& a) const { return a == 0; }
  std::string to_string(const value_type& a) const { return k3ks::to_string(a); }
  friend bool operator==(const RationalRing&, const RationalRing&) { return true; }
};

class PrimeField {
 public:
  using value_type = std::uint64_t;
  // Throws invalid_prime unless p is a prime below 2^31.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  // Throws denominator_divisible_by_p.
  value_type from_rational(const Rational& q) const;
  value_type add(value_type a, value_type b) const { return (a + b) % p_; }
  value_type sub(value_type a, value_type b) const { return (a + p_ - b) % p_; }
  value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type inv(value_type a) const;
  bool is_zero(value_type a) const { return a == 0; }
  std::string to_string(value_type a) const { return std::to_string(a); }
  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

template <class Ring>
class CliffordElt;

/// Clifford algebra of a symmetric bilinear form B on Q^n:
/// e_i e_j + e_j e_i = 2 B_ij. Monomials are bitmasks in increasing index
/// order. Products of a monomial with a generator are tabulated on creation.
template <class Ring>
class CliffordAlgebra : public std::enable_shared_from_this<CliffordAlgebra<Ring>> {
 public:
  using T = typename Ring::value_type;
  using Elt = CliffordElt<Ring>;
  using Terms = std::vector<std::pair<Mask, T>>;

  static std::shared_ptr<const CliffordAlgebra> make(const Matrix<Rational>& gram, Ring ring = Ring());

  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }
  const Ring& ring() const noexcept { return ring_; }
  const Matrix<Rational>& gram() const noexcept { return gram_; }

  // m * e_j expanded in monomials.
  const Terms& times_generator(Mask m, std::size_t j) const { return table_[m * n_ + j]; }

  Elt zero() const;
  Elt scalar(const T& c) const;
  Elt generator(std::size_t i) const;  // 0-based
  Elt monomial(Mask m, const T& c) const;
  // Grade-one element sum_i c_i e_i.
  Elt vector(const std::vector<T>& c) const;

  // Trace contribution of a monomial: coefficient of m in m * x summed over m.
  T monomial_trace(Mask x) const;

 private:
  CliffordAlgebra(const Matrix<Rational>& gram, Ring ring);
  Terms right_mul_generator(Mask m, std::size_t j) const;

  Ring ring_;
  std::size_t n_;
  Matrix<Rational> gram_;
  std::vector<T> b_;  // B_ij in the ring, row-major
  std::vector<Terms> table_;
  mutable std::mutex trace_mu_;
  mutable std::unordered_map<Mask, T> trace_cache_;
};

/// Sparse element: nonzero coefficients keyed by monomial mask.
template <class Ring>
class CliffordElt {
 public:
  using T = typename Ring::value_type;
  using Algebra = CliffordAlgebra<Ring>;

  CliffordElt() = default;
  CliffordElt(std::shared_ptr<const Algebra> alg, std::map<Mask, T> terms);

  const std::shared_ptr<const Algebra>& algebra() const noexcept { return alg_; }
  const std::map<Mask, T>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  T coeff(Mask m) const;

  bool is_even() const;
  bool is_odd() const;
  bool has_grade(unsigned k) const;  // every monomial has popcount k

  CliffordElt operator+(const CliffordElt& o) const;
  CliffordElt operator-(const CliffordElt& o) const;
  CliffordElt operator-() const;
  CliffordElt operator*(const CliffordElt& o) const;
  CliffordElt scaled(const T& s) const;
  bool operator==(const CliffordElt& o) const { return same_algebra(o) && terms_ == o.terms_; }

  // Anti-involution fixing generators.
  CliffordElt reverse() const;
  // Trace of y -> y * this on the full algebra.
  T trace_right_mult() const;
  // Dense coefficient vector of length 2^n.
  std::vector<T> coords() const;
  // Columns of y -> this * y in the monomial basis (sparse).
  std::vector<std::vector<std::pair<Mask, T>>> left_rep() const;
  // Two-sided inverse; throws not_invertible.
  CliffordElt inverse() const;

  // e.g. "e1e4 + 2*e2e6 - e3" (1-based generator labels).
  std::string to_string() const;

 private:
  bool same_algebra(const CliffordElt& o) const;
  void require_same(const CliffordElt& o) const;
  CliffordElt times_generator(std::size_t j) const;

  std::shared_ptr<const Algebra> alg_;
  std::map<Mask, T> terms_;
};

/// Basis label "e1e4" for a mask ("1" for the empty monomial).
std::string monomial_label(Mask m);

/// Reduce a rational element into the algebra over F_p with the same form.
CliffordElt<PrimeField> reduce_mod_p(const CliffordElt<RationalRing>& x,
                                     const std::shared_ptr<const CliffordAlgebra<PrimeField>>& target);

// ---------------------------------------------------------------------------

template <class Ring>
std::shared_ptr<const CliffordAlgebra<Ring>> CliffordAlgebra<Ring>::make(const Matrix<Rational>& gram, Ring ring) {
  return std::shared_ptr<const CliffordAlgebra>(new CliffordAlgebra(gram, std::move(ring)));
}

template <class Ring>
CliffordAlgebra<Ring>::CliffordAlgebra(const Matrix<Rational>& gram, Ring ring)
    : ring_(std::move(ring)), n_(gram.rows()), gram_(gram) {
  if (!gram.is_symmetric()) throw Error(ErrorCode::asymmetric_matrix, "Clifford form is not symmetric");
  if (n_ == 0 || n_ > 16) throw Error(ErrorCode::malformed_input, "Clifford algebra needs 1..16 generators");
  b_.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) b_.push_back(ring_.from_rational(gram(i, j)));
  table_.resize(dim() * n_);
  for (Mask m = 0; m < dim(); ++m)
    for (std::size_t j = 0; j < n_; ++j) table_[m * n_ + j] = right_mul_generator(m, j);
}

// m e_j by moving e_j left past the higher generators of m:
// e_t e_j = -e_j e_t + 2 B_tj.
template <class Ring>
typename CliffordAlgebra<Ring>::Terms CliffordAlgebra<Ring>::right_mul_generator(Mask m, std::size_t j) const {
  const Mask bit = Mask{1} << j;
  if (m == 0) return {{bit, ring_.one()}};
  const std::size_t top = 31 - static_cast<std::size_t>(__builtin_clz(m));
  if (top < j) return {{m | bit, ring_.one()}};
  const Mask rest = m & ~(Mask{1} << top);
  if (top == j) {
    const T& bjj = b_[j * n_ + j];
    if (ring_.is_zero(bjj)) return {};
    return {{rest, bjj}};
  }
  std::map<Mask, T> acc;
  auto add = [&](Mask k, const T& c) {
    auto it = acc.find(k);
    if (it == acc.end()) acc.emplace(k, c);
    else it->second = ring_.add(it->second, c);
  };
  // (rest e_t) e_j = -(rest e_j) e_t + 2 B_tj rest; rest e_j has top < t.
  for (const auto& [k, c] : right_mul_generator(rest, j)) add(k | (Mask{1} << top), ring_.neg(c));
  const T& btj = b_[top * n_ + j];
  if (!ring_.is_zero(btj)) add(rest, ring_.add(btj, btj));
  Terms out;
  for (auto& [k, c] : acc)
    if (!ring_.is_zero(c)) out.emplace_back(k, c);
  return out;
}

template <class Ring>
CliffordElt<Ring> CliffordAlgebra<Ring>::zero() const {
  return Elt(this->shared_from_this(), {});
}

template <class Ring>
CliffordElt<Ring> CliffordAlgebra<Ring>::monomial(Mask m, const T& c) const {
  if (m >= dim()) throw Error(ErrorCode::malformed_input, "monomial outside the algebra");
  std::map<Mask, T> t;
  if (!ring_.is_zero(c)) t.emplace(m, c);
  return Elt(this->shared_from_this(), std::move(t));
}

template <class Ring>
CliffordElt<Ring> CliffordAlgebra<Ring>::scalar(const T& c) const {
  return monomial(0, c);
}

template <class Ring>
CliffordElt<Ring> CliffordAlgebra<Ring>::generator(std::size_t i) const {
  if (i >= n_) throw Error(ErrorCode::malformed_input, "generator index out of range");
  return monomial(Mask{1} << i, ring_.one());
}

template <class Ring>
CliffordElt<Ring> CliffordAlgebra<Ring>::vector(const std::vector<T>& c) const {
  if (c.size() != n_) throw Error(ErrorCode::malformed_input, "vector length differs from n");
  std::map<Mask, T> t;
  for (std::size_t i = 0; i < n_; ++i)
    if (!ring_.is_zero(c[i])) t.emplace(Mask{1} << i, c[i]);
  return Elt(this->shared_from_this(), std::move(t));
}

template <class Ring>
typename Ring::value_type CliffordAlgebra<Ring>::monomial_trace(Mask x) const {
  {
    std::lock_guard<std::mutex> lock(trace_mu_);
    auto it = trace_cache_.find(x);
    if (it != trace_cache_.end()) return it->second;
  }
  const Elt xe = monomial(x, ring_.one());
  T total = ring_.zero();
  for (Mask m = 0; m < dim(); ++m) total = ring_.add(total, (monomial(m, ring_.one()) * xe).coeff(m));
  std::lock_guard<std::mutex> lock(trace_mu_);
  trace_cache_.emplace(x, total);
  return total;
}

template <class Ring>
CliffordElt<Ring>::CliffordElt(std::shared_ptr<const Algebra> alg, std::map<Mask, T> terms)
    : alg_(std::move(alg)), terms_(std::move(terms)) {
  const Ring& r = alg_->ring();
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (r.is_zero(it->second)) it = terms_.erase(it);
    else ++it;
  }
}

template <class Ring>
typename Ring::value_type CliffordElt<Ring>::coeff(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? alg_->ring().zero() : it->second;
}

template <class Ring>
bool CliffordElt<Ring>::is_even() const {
  for (const auto& [m, c] : terms_)
    if (__builtin_popcount(m) % 2) return false;
  return true;
}

template <class Ring>
bool CliffordElt<Ring>::is_odd() const {
  for (const auto& [m, c] : terms_)
    if (__builtin_popcount(m) % 2 == 0) return false;
  return true;
}

template <class Ring>
bool CliffordElt<Ring>::has_grade(unsigned k) const {
  for (const auto& [m, c] : terms_)
    if (static_cast<unsigned>(__builtin_popcount(m)) != k) return false;
  return true;
}

template <class Ring>
bool CliffordElt<Ring>::same_algebra(const CliffordElt& o) const {
  if (alg_ == o.alg_) return true;
  return alg_ && o.alg_ && alg_->gram() == o.alg_->gram() && alg_->ring() == o.alg_->ring();
}

template <class Ring>
void CliffordElt<Ring>::require_same(const CliffordElt& o) const {
  if (!alg_ || !o.alg_) throw Error(ErrorCode::internal, "Clifford element without an algebra");
  if (!same_algebra(o)) throw Error(ErrorCode::algebra_mismatch, "elements of different Clifford algebras");
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::operator+(const CliffordElt& o) const {
  require_same(o);
  const Ring& r = alg_->ring();
  std::map<Mask, T> t = terms_;
  for (const auto& [m, c] : o.terms_) {
    auto it = t.find(m);
    if (it == t.end()) t.emplace(m, c);
    else it->second = r.add(it->second, c);
  }
  return CliffordElt(alg_, std::move(t));
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::operator-() const {
  const Ring& r = alg_->ring();
  std::map<Mask, T> t;
  for (const auto& [m, c] : terms_) t.emplace(m, r.neg(c));
  return CliffordElt(alg_, std::move(t));
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::operator-(const CliffordElt& o) const {
  return *this + (-o);
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::scaled(const T& s) const {
  const Ring& r = alg_->ring();
  std::map<Mask, T> t;
  for (const auto& [m, c] : terms_) t.emplace(m, r.mul(s, c));
  return CliffordElt(alg_, std::move(t));
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::times_generator(std::size_t j) const {
  const Ring& r = alg_->ring();
  std::map<Mask, T> t;
  for (const auto& [m, c] : terms_)
    for (const auto& [k, d] : alg_->times_generator(m, j)) {
      const T v = r.mul(c, d);
      auto it = t.find(k);
      if (it == t.end()) t.emplace(k, v);
      else it->second = r.add(it->second, v);
    }
  return CliffordElt(alg_, std::move(t));
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::operator*(const CliffordElt& o) const {
  require_same(o);
  const Ring& r = alg_->ring();
  std::map<Mask, T> acc;
  for (const auto& [my, cy] : o.terms_) {
    CliffordElt cur = *this;
    for (std::size_t j = 0; j < alg_->n(); ++j)
      if (my >> j & 1) cur = cur.times_generator(j);
    for (const auto& [m, c] : cur.terms_) {
      const T v = r.mul(c, cy);
      auto it = acc.find(m);
      if (it == acc.end()) acc.emplace(m, v);
      else it->second = r.add(it->second, v);
    }
  }
  return CliffordElt(alg_, std::move(acc));
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::reverse() const {
  CliffordElt out = alg_->zero();
  for (const auto& [m, c] : terms_) {
    CliffordElt y = alg_->scalar(c);
    for (std::size_t j = alg_->n(); j-- > 0;)
      if (m >> j & 1) y = y.times_generator(j);
    out = out + y;
  }
  return out;
}

template <class Ring>
typename Ring::value_type CliffordElt<Ring>::trace_right_mult() const {
  const Ring& r = alg_->ring();
  T total = r.zero();
  for (const auto& [m, c] : terms_) total = r.add(total, r.mul(c, alg_->monomial_trace(m)));
  return total;
}

template <class Ring>
std::vector<typename Ring::value_type> CliffordElt<Ring>::coords() const {
  std::vector<T> v(alg_->dim(), alg_->ring().zero());
  for (const auto& [m, c] : terms_) v[m] = c;
  return v;
}

template <class Ring>
std::vector<std::vector<std::pair<Mask, typename Ring::value_type>>> CliffordElt<Ring>::left_rep() const {
  std::vector<std::vector<std::pair<Mask, T>>> cols(alg_->dim());
  for (Mask y = 0; y < alg_->dim(); ++y) {
    const CliffordElt p = *this * alg_->monomial(y, alg_->ring().one());
    cols[y].assign(p.terms_.begin(), p.terms_.end());
  }
  return cols;
}

template <class Ring>
CliffordElt<Ring> CliffordElt<Ring>::inverse() const {
  // Solve L y = 1 with L the dense left-multiplication matrix.
  const Ring& r = alg_->ring();
  const std::size_t d = alg_->dim();
  std::vector<std::vector<T>> a(d, std::vector<T>(d + 1, r.zero()));
  const auto cols = left_rep();
  for (std::size_t c = 0; c < d; ++c)
    for (const auto& [row, v] : cols[c]) a[row][c] = v;
  a[0][d] = r.one();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t p = col;
    while (p < d && r.is_zero(a[p][col])) ++p;
    if (p == d) throw Error(ErrorCode::not_invertible, "Clifford element is not invertible");
    std::swap(a[p], a[col]);
    const T inv = r.inv(a[col][col]);
    for (std::size_t k = col; k <= d; ++k)
      if (!r.is_zero(a[col][k])) a[col][k] = r.mul(a[col][k], inv);
    for (std::size_t i = 0; i < d; ++i) {
      if (i == col || r.is_zero(a[i][col])) continue;
      const T f = a[i][col];
      for (std::size_t k = col; k <= d; ++k)
        if (!r.is_zero(a[col][k])) a[i][k] = r.sub(a[i][k], r.mul(f, a[col][k]));
    }
  }
  std::map<Mask, T> t;
  for (std::size_t i = 0; i < d; ++i)
    if (!r.is_zero(a[i][d])) t.emplace(static_cast<Mask>(i), a[i][d]);
  CliffordElt y(alg_, std::move(t));
  if (!(y * *this == alg_->scalar(r.one())))
    throw Error(ErrorCode::not_invertible, "right inverse is not a left inverse");
  return y;
}

template <class Ring>
std::string CliffordElt<Ring>::to_string() const {
  if (terms_.empty()) return "0";
  const Ring& r = alg_->ring();
  // Order by grade, then by generator indices.
  std::vector<std::pair<Mask, T>> items(terms_.begin(), terms_.end());
  auto key = [](Mask m) {
    std::vector<int> idx;
    for (int i = 0; i < 32; ++i)
      if (m >> i & 1) idx.push_back(i);
    return std::make_pair(static_cast<int>(idx.size()), idx);
  };
  std::stable_sort(items.begin(), items.end(), [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
  std::string s;
  for (const auto& [m, c] : items) {
    std::string cs = r.to_string(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs.erase(0, 1);
    if (s.empty()) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    if (m == 0) s += cs;
    else s += (cs == "1" ? "" : cs + "*") + monomial_label(m);
  }
  return s;
}

extern template class CliffordAlgebra<RationalRing>;
extern template class CliffordAlgebra<PrimeField>;
extern template class CliffordElt<RationalRing>;
extern template class CliffordElt<PrimeField>;

using QClifford = CliffordAlgebra<RationalRing>;
using QElt = CliffordElt<RationalRing>;
using FpClifford = CliffordAlgebra<PrimeField>;
using FpElt = CliffordElt<PrimeField>;

}  // namespace k3ks

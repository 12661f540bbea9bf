#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "k3ks/interval.hpp"
#include "k3ks/matrix.hpp"
#include "k3ks/rational.hpp"

namespace k3ks {

class FieldElt;

namespace detail {
struct FieldData;
}

/// Totally real cubic field Q(alpha) where alpha acts as a symmetric integer
/// 3x3 matrix A. Elements are stored over the power basis (I, A, A^2).
class SymCubicField {
 public:
  /// Errors: asymmetric_matrix, reducible_charpoly, not_totally_real, no_b_basis.
  static SymCubicField make(const Matrix<Integer>& a);
  static SymCubicField make(std::initializer_list<std::initializer_list<long>> rows);
  // The matrix [[1,1,1],[1,1,0],[1,0,0]].
  static SymCubicField reference();

  const Matrix<Integer>& matrix() const;
  // Monic charpoly coefficients c0, c1, c2, c3 = 1 (x^3 + c2 x^2 + c1 x + c0).
  const std::array<Integer, 4>& charpoly() const;
  Integer discriminant() const;
  std::string charpoly_string() const;

  // Isolating intervals for the three real roots, descending, each of width
  // below 2^-bits.
  std::vector<Interval> roots(unsigned bits = 64) const;

  FieldElt zero() const;
  FieldElt one() const;
  FieldElt alpha() const;
  FieldElt element(const Rational& c0, const Rational& c1, const Rational& c2) const;
  FieldElt scalar(const Rational& c) const;

  // (b1, b2, b3) with b3 = 1 and alpha * b_j = sum_i b_i A_ij.
  std::array<FieldElt, 3> b_basis() const;

  friend bool operator==(const SymCubicField& a, const SymCubicField& b);

 private:
  friend class FieldElt;
  explicit SymCubicField(std::shared_ptr<const detail::FieldData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::FieldData> data_;
};

struct SignPattern {
  int positives = 0;
  int negatives = 0;
  std::vector<int> signs;  // per embedding, root order; 0 only for the zero element
  friend bool operator==(const SignPattern&, const SignPattern&) = default;
};

class FieldElt {
 public:
  FieldElt() = default;

  const std::array<Rational, 3>& coords() const noexcept { return c_; }
  SymCubicField field() const;

  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
  bool is_rational() const { return c_[1] == 0 && c_[2] == 0; }

  friend FieldElt operator+(const FieldElt& a, const FieldElt& b);
  friend FieldElt operator-(const FieldElt& a, const FieldElt& b);
  friend FieldElt operator-(const FieldElt& a);
  friend FieldElt operator*(const FieldElt& a, const FieldElt& b);
  friend FieldElt operator*(const Rational& s, const FieldElt& a);
  friend FieldElt operator/(const FieldElt& a, const FieldElt& b);
  friend bool operator==(const FieldElt& a, const FieldElt& b);

  // Throws inverse_of_zero.
  FieldElt inverse() const;

  // Polynomial in A: c0 I + c1 A + c2 A^2. Symmetric.
  Matrix<Rational> regular_rep() const;

  // Enclosures of the three real conjugates (root order), width < 2^-bits.
  std::vector<Interval> conjugates(unsigned bits = 64) const;
  Interval conjugate(std::size_t embedding, unsigned bits = 64) const;
  SignPattern sign_pattern() const;

  // "c0 + c1*A + c2*A^2" with zero terms dropped.
  std::string to_string() const;

 private:
  friend class SymCubicField;
  FieldElt(std::shared_ptr<const detail::FieldData> d, std::array<Rational, 3> c)
      : data_(std::move(d)), c_(std::move(c)) {}
  void require_same_field(const FieldElt& other) const;

  std::shared_ptr<const detail::FieldData> data_;
  std::array<Rational, 3> c_{Rational(0), Rational(0), Rational(0)};
};

// Enclosure of c0 + c1 x + c2 x^2 over x (Horner form).
Interval eval_interval(const std::array<Rational, 3>& coords, const Interval& x);

struct SearchOptions {
  Rational epsilon{1, 2};
  int height = 30;   // bound on |integer coordinates|
  int max_den = 64;  // denominators 1..max_den
};

struct SignPatternTriple {
  std::array<FieldElt, 3> f;
  std::size_t embedding = 0;  // common embedding where f1, f2 are positive
  std::array<SignPattern, 3> patterns;
  int height_used = 0;
};

/// Bounded-height search for f1, f2 positive at exactly one common embedding
/// (value > 1, within epsilon of each other, other conjugates at most
/// epsilon in absolute value) and f3 totally negative. Throws search_exhausted.
SignPatternTriple search_prop33(const SymCubicField& field, const SearchOptions& options = {});

/// Checks the candidate conditions of search_prop33 with certified intervals.
bool satisfies_sign_conditions(const std::array<FieldElt, 3>& f, const Rational& epsilon,
                      std::size_t* embedding = nullptr);

/// False only when x^2 is rational while x is not.
bool rational_square_check(const FieldElt& x);

/// Runs rational_square_check over every element with integer power-basis
/// coordinates of absolute value at most `height`. Returns the failure count.
std::size_t rational_square_sweep(const SymCubicField& field, int height);

}  // namespace k3ks

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k3ks/matrix.hpp"
#include "k3ks/rational.hpp"

namespace k3ks {

/// Quadratic form over Q given by a symmetric Gram matrix. Dimension 0 is
/// allowed (the neutral element of direct_sum).
class QForm {
 public:
  QForm() = default;
  explicit QForm(Matrix<Rational> gram);

  static QForm diagonal(const std::vector<Rational>& entries);
  static QForm diagonal(std::initializer_list<long> entries);

  std::size_t dim() const noexcept { return gram_.rows(); }
  const Matrix<Rational>& gram() const noexcept { return gram_; }
  Rational determinant() const;
  bool is_nondegenerate() const { return dim() == 0 || determinant() != 0; }

  // Gram matrix of the same form in the basis given by the columns of b.
  QForm change_basis(const Matrix<Rational>& b) const;

  friend bool operator==(const QForm&, const QForm&) = default;

 private:
  Matrix<Rational> gram_;
};

/// A place of Q: the archimedean place or a prime.
class Place {
 public:
  static Place real() { return Place(0); }
  static Place prime(long p);

  bool is_real() const noexcept { return p_ == 0; }
  long prime() const noexcept { return p_; }
  std::string to_string() const;
  static Place parse(const std::string& text);

  // real < 2 < 3 < 5 < ...
  friend auto operator<=>(const Place&, const Place&) = default;

 private:
  explicit Place(long p) : p_(p) {}
  long p_;
};

/// Pairing convention for the Hasse invariant: product of Hilbert symbols
/// (c_i, c_j) over i <= j or over i < j. The two differ by (disc, -1).
enum class HasseConvention { leq, lt };
std::string to_string(HasseConvention c);

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct FormInvariants {
  std::size_t dim = 0;
  Signature signature;
  Integer disc = 1;  // signed squarefree representative
  HasseConvention convention = HasseConvention::leq;
  std::map<Place, int> hasse;      // under `convention`, on relevant places
  std::map<Place, int> hasse_alt;  // under the other convention
  std::vector<Integer> diagonal;   // squarefree diagonalisation

  std::vector<Place> places() const;
  // Value at any place; places outside the relevant set evaluate to +1.
  int hasse_at(const Place& v) const;
  int hasse_at(const Place& v, HasseConvention c) const;
};

struct Diagonalization {
  std::vector<Integer> entries;  // squarefree, nonzero
  Matrix<Rational> basis;        // columns: basis^T * gram * basis = diag(entries)
};

/// Congruence diagonalisation; entries reduced to squarefree integers.
/// Throws DegenerateFormError naming the radical dimension.
Diagonalization diagonalize(const QForm& q);

/// Hilbert symbol (a, b)_v for nonzero rationals.
int hilbert_symbol(const Rational& a, const Rational& b, const Place& v);

/// Places where a Hasse invariant of a form with these diagonal entries can
/// differ from +1: the real place, 2, and primes dividing an entry.
std::vector<Place> relevant_places(const std::vector<Integer>& diagonal);

FormInvariants form_invariants(const QForm& q,
                               HasseConvention convention = HasseConvention::leq);

int hasse_invariant(const std::vector<Integer>& diagonal, const Place& v,
                    HasseConvention convention);

QForm direct_sum(const QForm& a, const QForm& b);

/// Hasse-Minkowski: dimension, signature, discriminant and every local Hasse
/// invariant agree. Throws on degenerate input.
bool equivalent_over_q(const QForm& a, const QForm& b);

/// Square class of Q_p^* at an odd prime p.
struct LocalClass {
  bool odd_valuation = false;     // valuation mod 2
  bool nonresidue_unit = false;   // unit part is a quadratic nonresidue
  friend bool operator==(const LocalClass&, const LocalClass&) = default;
};
LocalClass local_class(const Rational& x, long p);

/// Square class of Q_2^*: valuation parity and unit part mod 8.
struct DyadicClass {
  bool odd_valuation = false;
  unsigned unit_mod8 = 1;  // one of 1, 3, 5, 7
  friend bool operator==(const DyadicClass&, const DyadicClass&) = default;
};
DyadicClass dyadic_class(const Rational& x);

/// Least quadratic nonresidue modulo an odd prime, searched from 2 upward.
long least_nonresidue(long p);

/// A 4-dimensional diagonal form with the requested discriminant square
/// class and Hasse invariant at the odd prime p. Tries the four standard
/// shapes <1,-1,1,-1>, <1,-a,p,-ap>, <1,-1,1,p>, <1,-1,a,p> first.
QForm build_local_form(long p, LocalClass want_disc, int want_hasse,
                       HasseConvention convention = HasseConvention::leq);

/// Dyadic counterpart: searched over diagonal entries in
/// {±1, ±2, ±3, ±5, ±6, ±7, ±10, ±14}.
QForm build_dyadic_form(DyadicClass want_disc, int want_hasse,
                        HasseConvention convention = HasseConvention::leq);

struct PlaceRecord {
  Place place = Place::real();
  int target_hasse = 1;    // required Hasse invariant (i<j) of the complement
  int achieved_hasse = 1;  // Hasse invariant of the assembled complement
  int sum_hasse = 1;       // Hasse(q1 + complement), i<j
  int q2_hasse = 1;        // Hasse(q2), i<j
  bool fixed_by_reciprocity = false;
  std::optional<QForm> local_witness;  // 4-dim local realisation of the target
  bool matched = false;
};

struct ComplementCertificate {
  QForm complement;
  Integer target_disc = 1;
  Signature target_signature;
  std::vector<PlaceRecord> places;
  bool verified = false;
};

/// Complement c of dimension dim q2 - dim q1 with q1 + c ~ q2 over Q.
/// Errors: ErrorCode::codimension_too_small, ErrorCode::real_obstruction.
ComplementCertificate complement_for_embedding(const QForm& q1, const QForm& q2);

}  // namespace k3ks

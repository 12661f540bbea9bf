#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "k3ks/field.hpp"
#include "k3ks/interval.hpp"
#include "k3ks/qform.hpp"

namespace k3ks {

QForm gram_U();
// Cartan matrix of E8, Bourbaki numbering.
QForm gram_E8();
// U+U+U+(-E8)+(-E8).
QForm gram_L0();
// <2d>+U+U+(-E8)+(-E8); the first hyperbolic plane is replaced by the
// line spanned by e1 + d f1. Throws invalid_lattice_parameter for d < 1.
QForm gram_L2d(long d);

struct TranscendentalSpace {
  SymCubicField field;
  std::array<FieldElt, 3> phi;
  QForm D;
  std::array<SignPattern, 3> patterns;
  FormInvariants invariants;
  // Sum of the phi sign patterns equals the signature of D.
  bool signature_matches_patterns = false;
  // Embedding where phi_1 is positive, when phi_1 has exactly one positive
  // conjugate and phi_2 is positive there too.
  std::optional<std::size_t> chosen_embedding;
};

/// D = diag(regular_rep(phi_1), regular_rep(phi_2), regular_rep(phi_3)).
/// Throws zero_phi when some phi_k vanishes.
TranscendentalSpace build_transcendental(const SymCubicField& field, const std::array<FieldElt, 3>& phi);

struct CMAction {
  FieldElt a;
  Matrix<Rational> m;     // three copies of regular_rep(a)
  bool identity_holds;    // m^T D m == D m_{a^2}, exact
};

CMAction cm_action(const TranscendentalSpace& space, const FieldElt& a);

/// True iff a^2 is rational.
bool is_cup_preserving(const TranscendentalSpace& space, const FieldElt& a);

struct PeriodVector {
  std::array<std::string, 9> symbolic;  // "b_i*x_j"
  Rational t;                           // x2 = i t
  unsigned precision_bits = 128;
  std::size_t embedding = 0;
  Interval q1, q2, q3;
  Interval x3;
  std::array<ComplexInterval, 9> v;
  ComplexInterval residual;  // v^T D v
  Interval hermitian;        // conj(v)^T D v
  Interval two_q2_t2;        // 2 q2 t^2 = conj(v)^T D v on the quadric
  Interval two_q1;
  Rational residual_bound;   // certified |v^T D v| bound
  bool residual_ok = false;  // residual_bound < 1e-25
  bool hermitian_contains_two_q2_t2 = false;
  bool hermitian_contains_two_q1 = false;
  bool hermitian_positive = false;
};

/// Requires phi patterns (1,2), (1,2), (0,3) with a common positive embedding
/// (invalid_phi_pattern) and 0 < t^2 < q1/q2 (t_out_of_range).
PeriodVector solve_period(const TranscendentalSpace& space, const Rational& t, unsigned bits = 128);

/// A rational t slightly inside the admissible range: floor(0.99 sqrt(q1/q2)
/// * 100) / 100.
Rational default_period_parameter(const TranscendentalSpace& space);

ComplementCertificate embeds_in_k3(const TranscendentalSpace& space, long d);

struct HodgeIsometryReport {
  std::string witness;               // element used as the CM witness
  bool irrational_witness = false;
  bool cm_identity_exact = false;    // M^T D M = D M_{a^2}
  bool cm_invertible = false;
  bool period_checked = false;
  bool period_scaled = false;        // v M_a - sigma(a) v encloses 0
  bool complement_preserved = false; // v^T D M_a - sigma(a) v^T D encloses 0
  bool witness_cup_preserving = true;
  int sweep_height = 5;
  std::size_t sweep_failures = 0;
  bool established = false;
};

/// Evidence that CM by an irrational element is a Hodge endomorphism that does
/// not preserve the cup product up to a rational multiple. The witness
/// defaults to alpha.
HodgeIsometryReport hodge_vs_isometry(const TranscendentalSpace& space,
                                      const std::optional<FieldElt>& witness = std::nullopt,
                                      const std::optional<PeriodVector>& period = std::nullopt,
                                      int sweep_height = 5);

}  // namespace k3ks

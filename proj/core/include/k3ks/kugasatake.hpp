#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k3ks/clifford.hpp"
#include "k3ks/field.hpp"
#include "k3ks/k3lattice.hpp"
#include "k3ks/rank.hpp"

namespace k3ks {

/// Clifford element with coefficients in the cubic field.
using FieldCliffordElt = std::map<Mask, FieldElt>;

std::string to_string(const FieldCliffordElt& x);

/// How the 9x9 matrix D defines the Clifford relations.
///   polar:                  e_i e_j + e_j e_i = 2 D_ij
///   quadratic_coefficients: D_ij are the coefficients of sum_{i<=j} D_ij x_i x_j,
///                           so e_i e_j + e_j e_i = D_ij for i != j and e_i^2 = D_ii
enum class RelationConvention { polar, quadratic_coefficients };
std::string to_string(RelationConvention c);
RelationConvention parse_relation_convention(const std::string& s);

/// The symmetric bilinear form B with e_i e_j + e_j e_i = 2 B_ij.
Matrix<Rational> relation_form(const Matrix<Rational>& d, RelationConvention c);

struct SymbolicPeriodProduct {
  // Keys: "x1i", "x2i", "x1r*x1i", "x1r*x2i", "x2r*x1i", "x2r*x2i".
  std::map<std::string, FieldCliffordElt> coefficient;
  std::array<FieldCliffordElt, 3> u;  // u_k = b1 e_{3k+1} + b2 e_{3k+2} + b3 e_{3k+3}
  SymCubicField field;
  std::shared_ptr<const QClifford> algebra;
};

/// Expands f1 f2 with f1 = u0 + x1r u1 + x2r u2 and f2 = x1i u1 + x2i u2.
/// Throws not_block_diagonal unless the form is block diagonal in 3+3+3.
SymbolicPeriodProduct expand_f1f2(const SymCubicField& field, const std::shared_ptr<const QClifford>& algebra);

struct GeneratorSet {
  // G1..G3: A^2, A, 1 components of u0 u1; G4..G6 of u1 u2; G7..G9 of u0 u2.
  std::array<QElt, 9> g;
  bool golden_ok = false;      // G1..G3 equal the printed generators
  bool identities_ok = false;  // A(A^2-A-1) = A^2-1 and (A^2-A-1)^2 = A+1
  std::vector<QElt> as_vector() const { return {g.begin(), g.end()}; }
};

/// The three printed generators, as text.
const std::array<std::string, 3>& printed_generators();
/// Parses "e1e4 + e2e6 - 2*e3e5" style text into an element.
QElt parse_clifford(const std::string& text, const std::shared_ptr<const QClifford>& algebra);

/// Throws golden_mismatch when G1..G3 differ from the printed generators and
/// the field is the default one.
GeneratorSet build_generators(const SymbolicPeriodProduct& product);

struct KSRankConfig {
  SymCubicField field = SymCubicField::reference();
  std::optional<std::array<FieldElt, 3>> phi;  // default (A, A^2-A-1, 1) = b-basis
  std::uint64_t prime = 101;
  std::vector<WordPolicy> policies = {WordPolicy::three_fold(), WordPolicy::restricted_four_fold(),
                                      WordPolicy::closure()};
  RelationConvention convention = RelationConvention::quadratic_coefficients;
  bool include_alternate = true;  // also run the other convention
  unsigned threads = 0;
};

struct KSRankReport {
  std::array<std::string, 9> generators;
  bool golden_ok = false;
  bool identities_ok = false;
  RelationConvention convention = RelationConvention::quadratic_coefficients;
  std::vector<RankReport> ranks;
  std::optional<RelationConvention> alternate_convention;
  std::vector<RankReport> alternate_ranks;
};

KSRankReport run_prop51(const KSRankConfig& config = {});

struct ComplexStructure {
  std::shared_ptr<const QClifford> algebra;
  QElt f1, f2;
  QElt j;                   // f1 f2 / f1^2
  std::vector<Mask> even;   // basis of the even part, ascending masks
  Matrix<Rational> matrix;  // left multiplication by j on the even part
  bool squares_to_minus_one = false;
};

/// Errors: not_grade_one, non_orthogonal_pair, bad_square.
ComplexStructure complex_structure(const std::shared_ptr<const QClifford>& algebra, const QElt& f1,
                                   const QElt& f2);

/// Which orthogonal generator pair e_a e_b enters the trace form.
///   same_sign_as_f:   first two generators whose squares share the sign of f1^2
///   negative_squares: first two generators with negative squares
enum class PairSelection { same_sign_as_f, negative_squares };
std::string to_string(PairSelection p);

struct SignCandidate {
  int sign = 1;
  Signature signature;  // of the symmetric form E(x, J y)
  bool symmetric = false;
  bool positive_definite = false;
};

struct KSPolarization {
  std::array<std::size_t, 2> pair{};
  PairSelection selection = PairSelection::same_sign_as_f;
  std::optional<int> sign;       // chosen sign, if one works
  Matrix<Rational> e;            // E(a, b) on the even basis
  Matrix<Rational> e_j;          // E(a, J b)
  bool skew = false;
  bool j_invariant = false;      // E(Ja, Jb) = E(a, b)
  std::array<SignCandidate, 2> candidates;
};

/// E(v, w) = trace_right_mult(s e_a e_b reverse(v) w) on the even part.
/// Requires a diagonal form (not_block_diagonal) and a suitable pair
/// (missing_polarization_pair). When neither sign works, `sign` is empty and
/// the candidates carry the diagnostic.
KSPolarization ks_polarization(const ComplexStructure& cs, PairSelection selection = PairSelection::same_sign_as_f);

struct EmbeddingV {
  QElt e;
  std::vector<Matrix<Rational>> phi;  // Phi_{e_i}(x) = e_i x e on the even part
  Matrix<Rational> rho;               // conjugation by j on V, columns = images of e_i
  bool rho_preserves_v = false;       // j e_i j^-1 stays grade one
  bool equivariant = false;           // J Phi_v J^-1 = Phi_{rho(v)} for all basis v
  std::vector<bool> literal_commutes; // Phi_{e_i} J == J Phi_{e_i}
};

/// Errors: parity_violation (e not odd), not_invertible.
EmbeddingV embed_V(const ComplexStructure& cs, const QElt& e);

struct PullbackReport {
  Matrix<Rational> pairing;            // P(v, w) = tr(Phi_v M^-1 Phi_w^T M)
  bool proportional = false;
  Rational multiple_of_gram{0};        // P = m * gram
  Rational lambda{0};                  // P = lambda * psi_V with psi_V = -gram
  bool lambda_positive = false;
  bool weil_positive = false;          // psi_V(x, C y) positive definite, C = rho
  struct Variant {
    std::string g;
    Rational lambda{0};
    bool proportional = false;
    bool same_class = false;           // lambda'/lambda is a positive rational
  };
  std::vector<Variant> right_multiplied;
};

/// Throws not_proportional when P is not a multiple of the form.
PullbackReport pullback_check(const KSPolarization& pol, const EmbeddingV& emb, const ComplexStructure& cs,
                              const std::vector<QElt>& right_factors = {});

/// The 4-generator instance diag(1,1,-1,-1), f1 = e1, f2 = e2.
struct SmallKSInstance {
  ComplexStructure cs;
  KSPolarization polarization;
  EmbeddingV embedding;
  PullbackReport pullback;
};
SmallKSInstance run_small_instance(PairSelection selection = PairSelection::same_sign_as_f);

}  // namespace k3ks

#pragma once

#include <json.hpp>

#include "k3ks/clifford.hpp"
#include "k3ks/field.hpp"
#include "k3ks/k3lattice.hpp"
#include "k3ks/kugasatake.hpp"
#include "k3ks/qform.hpp"
#include "k3ks/rank.hpp"

namespace k3ks {

// Insertion-ordered so that reports are byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const Matrix<Rational>& m);
Matrix<Rational> matrix_from_json(const Json& j);
Json to_json(const Matrix<Integer>& m);
Matrix<Integer> integer_matrix_from_json(const Json& j);

// Decimal endpoints, rounded outward.
Json to_json(const Interval& x, int digits = 40);
Json to_json(const ComplexInterval& z, int digits = 40);

// {"dim": n, "gram": [["p/q", ...], ...]}
Json to_json(const QForm& q);
QForm qform_from_json(const Json& j);
Json to_json(const Signature& s);
Json to_json(const FormInvariants& inv);
Json to_json(const ComplementCertificate& c);

// Field: its matrix A. Elements: three rational strings over (I, A, A^2).
Json to_json(const SymCubicField& f);
SymCubicField field_from_json(const Json& j);
Json to_json(const FieldElt& x);
FieldElt field_elt_from_json(const Json& j, const SymCubicField& f);
Json to_json(const SignPattern& p);

Json to_json(const TranscendentalSpace& s);
Json to_json(const PeriodVector& v);
Json to_json(const HodgeIsometryReport& r);

// [[indices...], "coefficient"] per monomial, indices 1-based.
Json to_json(const QElt& x);
QElt clifford_from_json(const Json& j, const std::shared_ptr<const QClifford>& algebra);

// Timings are left out unless asked for.
Json to_json(const RankReport& r, bool with_timing = false);
Json to_json(const KSRankReport& r, bool with_timing = false);
Json to_json(const ComplexStructure& cs);
Json to_json(const KSPolarization& p);
Json to_json(const EmbeddingV& e);
Json to_json(const PullbackReport& p);
Json to_json(const SmallKSInstance& s);

}  // namespace k3ks

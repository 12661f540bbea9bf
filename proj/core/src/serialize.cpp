#include "k3ks/serialize.hpp"

#include "k3ks/error.hpp"

namespace k3ks {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::malformed_input, what); }

template <class T, class F>
Json matrix_json(const Matrix<T>& m, F&& cell) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(cell(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T, class F>
Matrix<T> matrix_parse(const Json& j, F&& cell) {
  if (!j.is_array()) malformed("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Matrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) malformed("matrix rows must be arrays of equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = cell(j[r][c]);
  }
  return m;
}

Json hasse_json(const std::map<Place, int>& h) {
  Json out = Json::object();
  for (const auto& [p, v] : h) out[p.to_string()] = v;
  return out;
}

Json string_list(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

Json matrix_rows(const Matrix<Rational>& m) { return to_json(m); }

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    malformed(std::string("bad rational: ") + e.what());
  }
  malformed("rational must be a string \"p/q\" or an integer");
}

Json to_json(const Matrix<Rational>& m) {
  return matrix_json(m, [](const Rational& q) { return to_json(q); });
}

Matrix<Rational> matrix_from_json(const Json& j) {
  return matrix_parse<Rational>(j, [](const Json& c) { return rational_from_json(c); });
}

Json to_json(const Matrix<Integer>& m) {
  return matrix_json(m, [](const Integer& z) { return Json(to_string(z)); });
}

Matrix<Integer> integer_matrix_from_json(const Json& j) {
  return matrix_parse<Integer>(j, [](const Json& c) {
    const Rational q = rational_from_json(c);
    if (q.get_den() != 1) malformed("matrix entry " + to_string(q) + " is not an integer");
    return Integer(q.get_num());
  });
}

Json to_json(const Interval& x, int digits) {
  return Json{{"lo", to_decimal(x.lo(), digits, -1)}, {"hi", to_decimal(x.hi(), digits, +1)}};
}

Json to_json(const ComplexInterval& z, int digits) {
  return Json{{"re", to_json(z.re, digits)}, {"im", to_json(z.im, digits)}};
}

Json to_json(const QForm& q) { return Json{{"dim", q.dim()}, {"gram", to_json(q.gram())}}; }

QForm qform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("gram")) malformed("form must be an object with a \"gram\" field");
  QForm q(matrix_from_json(j.at("gram")));
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != q.dim()) malformed("\"dim\" disagrees with \"gram\"");
  return q;
}

Json to_json(const Signature& s) { return Json::array({s.positive, s.negative}); }

Json to_json(const FormInvariants& inv) {
  Json diag = Json::array();
  for (const auto& d : inv.diagonal) diag.push_back(to_string(d));
  const HasseConvention other = inv.convention == HasseConvention::leq ? HasseConvention::lt : HasseConvention::leq;
  return Json{{"dim", inv.dim},
              {"signature", to_json(inv.signature)},
              {"disc", to_string(inv.disc)},
              {"convention", to_string(inv.convention)},
              {"hasse", hasse_json(inv.hasse)},
              {"hasse_" + std::string(other == HasseConvention::lt ? "lt" : "leq"), hasse_json(inv.hasse_alt)},
              {"diagonal", diag}};
}

Json to_json(const ComplementCertificate& c) {
  Json places = Json::array();
  for (const auto& p : c.places) {
    Json rec{{"place", p.place.to_string()},
             {"target_hasse", p.target_hasse},
             {"achieved_hasse", p.achieved_hasse},
             {"sum_hasse", p.sum_hasse},
             {"q2_hasse", p.q2_hasse},
             {"fixed_by_reciprocity", p.fixed_by_reciprocity},
             {"matched", p.matched}};
    if (p.local_witness) rec["local_witness"] = to_json(*p.local_witness);
    places.push_back(std::move(rec));
  }
  return Json{{"complement", to_json(c.complement)},
              {"target_disc", to_string(c.target_disc)},
              {"target_signature", to_json(c.target_signature)},
              {"hasse_convention", "i<j"},
              {"places", places},
              {"verified", c.verified},
              {"method", "exact"}};
}

Json to_json(const SymCubicField& f) {
  Json roots = Json::array();
  for (const auto& r : f.roots(64)) roots.push_back(to_json(r, 20));
  return Json{{"A", to_json(f.matrix())},
              {"charpoly", f.charpoly_string()},
              {"discriminant", to_string(f.discriminant())},
              {"roots", roots}};
}

SymCubicField field_from_json(const Json& j) {
  const Json& a = j.is_object() ? j.at("A") : j;
  return SymCubicField::make(integer_matrix_from_json(a));
}

Json to_json(const FieldElt& x) {
  Json out = Json::array();
  for (const auto& c : x.coords()) out.push_back(to_json(c));
  return out;
}

FieldElt field_elt_from_json(const Json& j, const SymCubicField& f) {
  if (!j.is_array() || j.size() != 3) malformed("field element must be three rationals over (I, A, A^2)");
  return f.element(rational_from_json(j[0]), rational_from_json(j[1]), rational_from_json(j[2]));
}

Json to_json(const SignPattern& p) {
  return Json{{"positives", p.positives}, {"negatives", p.negatives}, {"signs", p.signs}};
}

Json to_json(const TranscendentalSpace& s) {
  Json phi = Json::array(), text = Json::array(), patterns = Json::array();
  for (int k = 0; k < 3; ++k) {
    phi.push_back(to_json(s.phi[k]));
    text.push_back(s.phi[k].to_string());
    patterns.push_back(to_json(s.patterns[k]));
  }
  Json out{{"phi", phi},
           {"phi_text", text},
           {"patterns", patterns},
           {"D", to_json(s.D)},
           {"invariants", to_json(s.invariants)},
           {"signature_matches_patterns", s.signature_matches_patterns}};
  out["chosen_embedding"] = s.chosen_embedding ? Json(*s.chosen_embedding) : Json(nullptr);
  return out;
}

Json to_json(const PeriodVector& v) {
  Json comps = Json::array();
  for (int i = 0; i < 9; ++i) comps.push_back(Json{{"symbol", v.symbolic[i]}, {"value", to_json(v.v[i], 30)}});
  // x3^2 = (t^2 q2 - q1) / q3 is generated by t and the field data.
  return Json{{"t", to_json(v.t)},
              {"precision_bits", v.precision_bits},
              {"embedding", v.embedding},
              {"q1", to_json(v.q1)},
              {"q2", to_json(v.q2)},
              {"q3", to_json(v.q3)},
              {"x3_squared", to_json(square(v.x3))},
              {"x3", to_json(v.x3)},
              {"v", comps},
              {"residual", to_json(v.residual, 10)},
              {"residual_bound", to_decimal(v.residual_bound, 10, +1)},
              {"residual_ok", v.residual_ok},
              {"hermitian", to_json(v.hermitian)},
              {"two_q2_t2", to_json(v.two_q2_t2)},
              {"two_q1", to_json(v.two_q1)},
              {"hermitian_contains_two_q2_t2", v.hermitian_contains_two_q2_t2},
              {"hermitian_contains_two_q1", v.hermitian_contains_two_q1},
              {"hermitian_positive", v.hermitian_positive},
              {"method", "interval"}};
}

Json to_json(const HodgeIsometryReport& r) {
  return Json{{"witness", r.witness},
              {"irrational_witness", r.irrational_witness},
              {"cm_identity_exact", r.cm_identity_exact},
              {"cm_invertible", r.cm_invertible},
              {"period_checked", r.period_checked},
              {"period_scaled", r.period_scaled},
              {"complement_preserved", r.complement_preserved},
              {"witness_cup_preserving", r.witness_cup_preserving},
              {"sweep_height", r.sweep_height},
              {"sweep_failures", r.sweep_failures},
              {"established", r.established},
              {"method", "exact + interval"}};
}

Json to_json(const QElt& x) {
  Json out = Json::array();
  for (const auto& [m, c] : x.terms()) {
    Json idx = Json::array();
    for (int i = 0; i < 32; ++i)
      if (m >> i & 1) idx.push_back(i + 1);
    out.push_back(Json::array({idx, to_json(c)}));
  }
  return out;
}

QElt clifford_from_json(const Json& j, const std::shared_ptr<const QClifford>& algebra) {
  if (!j.is_array()) malformed("Clifford element must be a list of [indices, coefficient]");
  QElt out = algebra->zero();
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array()) malformed("bad Clifford term");
    QElt mono = algebra->scalar(rational_from_json(term[1]));
    for (const auto& i : term[0]) {
      const long k = i.get<long>();
      if (k < 1 || static_cast<std::size_t>(k) > algebra->n()) malformed("generator index out of range");
      mono = mono * algebra->generator(static_cast<std::size_t>(k - 1));
    }
    out = out + mono;
  }
  return out;
}

Json to_json(const RankReport& r, bool with_timing) {
  Json out{{"policy", r.policy},
           {"modulus", r.modulus},
           {"words", r.words},
           {"distinct_words", r.distinct_words},
           {"rank", r.rank},
           {"method", r.method},
           {"bound", "rank mod p is a lower bound for the rank over Q"}};
  out["closure_rank"] = r.closure_rank ? Json(*r.closure_rank) : Json(nullptr);
  if (with_timing) out["seconds"] = r.seconds;
  return out;
}

Json to_json(const KSRankReport& r, bool with_timing) {
  Json ranks = Json::array(), alt = Json::array();
  for (const auto& x : r.ranks) ranks.push_back(to_json(x, with_timing));
  for (const auto& x : r.alternate_ranks) alt.push_back(to_json(x, with_timing));
  Json out{{"generators", string_list({r.generators.begin(), r.generators.end()})},
           {"golden_ok", r.golden_ok},
           {"identities_ok", r.identities_ok},
           {"convention", to_string(r.convention)},
           {"ranks", ranks}};
  if (r.alternate_convention) {
    out["alternate_convention"] = to_string(*r.alternate_convention);
    out["alternate_ranks"] = alt;
  }
  return out;
}

Json to_json(const ComplexStructure& cs) {
  return Json{{"f1", cs.f1.to_string()},
              {"f2", cs.f2.to_string()},
              {"j", cs.j.to_string()},
              {"even_dim", cs.even.size()},
              {"squares_to_minus_one", cs.squares_to_minus_one},
              {"method", "exact"}};
}

Json to_json(const KSPolarization& p) {
  Json cands = Json::array();
  for (const auto& c : p.candidates)
    cands.push_back(Json{{"sign", c.sign},
                         {"symmetric", c.symmetric},
                         {"signature", to_json(c.signature)},
                         {"positive_definite", c.positive_definite}});
  Json out{{"pair", Json::array({p.pair[0] + 1, p.pair[1] + 1})}, {"selection", to_string(p.selection)}};
  out["sign"] = p.sign ? Json(*p.sign) : Json(nullptr);
  out["skew"] = p.skew;
  out["j_invariant"] = p.j_invariant;
  out["candidates"] = cands;
  out["method"] = "exact";
  return out;
}

Json to_json(const EmbeddingV& e) {
  return Json{{"e", e.e.to_string()},
              {"rho", matrix_rows(e.rho)},
              {"rho_preserves_v", e.rho_preserves_v},
              {"equivariant", e.equivariant},
              {"literal_commutes", e.literal_commutes},
              {"method", "exact"}};
}

Json to_json(const PullbackReport& p) {
  Json variants = Json::array();
  for (const auto& v : p.right_multiplied)
    variants.push_back(Json{{"g", v.g},
                            {"proportional", v.proportional},
                            {"lambda", to_json(v.lambda)},
                            {"same_class", v.same_class}});
  return Json{{"pairing", matrix_rows(p.pairing)},
              {"proportional", p.proportional},
              {"multiple_of_gram", to_json(p.multiple_of_gram)},
              {"lambda", to_json(p.lambda)},
              {"lambda_positive", p.lambda_positive},
              {"weil_positive", p.weil_positive},
              {"right_multiplied", variants},
              {"method", "exact"}};
}

Json to_json(const SmallKSInstance& s) {
  Json out{{"gram", matrix_rows(s.cs.algebra->gram())},
           {"complex_structure", to_json(s.cs)},
           {"polarization", to_json(s.polarization)},
           {"embedding", to_json(s.embedding)}};
  if (s.polarization.sign) out["pullback"] = to_json(s.pullback);
  return out;
}

}  // namespace k3ks

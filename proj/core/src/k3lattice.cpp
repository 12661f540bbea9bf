#include "k3ks/k3lattice.hpp"

#include <cmath>

#include "k3ks/error.hpp"

namespace k3ks {

namespace {

Matrix<Rational> scaled(const Matrix<Rational>& m, long s) { return Rational(s) * m; }

// Sum_ij u_i D_ij w_j over interval-valued complex vectors.
ComplexInterval bilinear(const Matrix<Rational>& d, const std::array<ComplexInterval, 9>& u,
                         const std::array<ComplexInterval, 9>& w) {
  ComplexInterval acc{Interval(Rational(0)), Interval(Rational(0))};
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      if (d(i, j) == 0) continue;
      acc = acc + Interval(d(i, j)) * (u[i] * w[j]);
    }
  return acc;
}

std::array<ComplexInterval, 9> mat_vec(const Matrix<Rational>& m, const std::array<ComplexInterval, 9>& v) {
  std::array<ComplexInterval, 9> out;
  for (std::size_t i = 0; i < 9; ++i) {
    ComplexInterval acc{Interval(Rational(0)), Interval(Rational(0))};
    for (std::size_t j = 0; j < 9; ++j)
      if (m(i, j) != 0) acc = acc + Interval(m(i, j)) * v[j];
    out[i] = acc;
  }
  return out;
}

bool all_contain_zero(const std::array<ComplexInterval, 9>& v) {
  for (const auto& x : v)
    if (!x.contains_zero()) return false;
  return true;
}

bool valid_pattern(const TranscendentalSpace& s) {
  const auto& p = s.patterns;
  return s.chosen_embedding && p[0].positives == 1 && p[0].negatives == 2 && p[1].positives == 1 &&
         p[1].negatives == 2 && p[2].negatives == 3;
}

struct PeriodConstants {
  std::size_t k;
  std::array<Interval, 3> sb;  // sigma(b_i)
  Interval q1, q2, q3;
};

PeriodConstants period_constants(const TranscendentalSpace& space, unsigned bits) {
  if (!valid_pattern(space))
    throw Error(ErrorCode::invalid_phi_pattern,
                "period solve needs phi sign patterns (1,2), (1,2), (0,3) with a common positive embedding");
  PeriodConstants c;
  c.k = *space.chosen_embedding;
  const unsigned work = bits + 32;
  const auto b = space.field.b_basis();
  Interval norm(Rational(0));
  for (int i = 0; i < 3; ++i) {
    c.sb[i] = b[i].conjugate(c.k, work).round_out(work);
    norm = norm + square(c.sb[i]);
  }
  std::array<Interval, 3> q;
  for (int i = 0; i < 3; ++i) q[i] = (space.phi[i].conjugate(c.k, work) * norm).round_out(work);
  c.q1 = q[0];
  c.q2 = q[1];
  c.q3 = q[2];
  return c;
}

}  // namespace

QForm gram_U() { return QForm(Matrix<Rational>{{0, 1}, {1, 0}}); }

QForm gram_E8() {
  Matrix<Rational> m(8, 8);
  for (int i = 0; i < 8; ++i) m(i, i) = 2;
  // Bourbaki: 1-3, 3-4, 4-5, 5-6, 6-7, 7-8 and 2-4.
  const int edges[][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
  for (const auto& e : edges) {
    m(e[0] - 1, e[1] - 1) = -1;
    m(e[1] - 1, e[0] - 1) = -1;
  }
  return QForm(m);
}

QForm gram_L0() {
  const auto u = gram_U().gram();
  const auto e8 = scaled(gram_E8().gram(), -1);
  return QForm(block_diagonal<Rational>({u, u, u, e8, e8}));
}

QForm gram_L2d(long d) {
  if (d < 1) throw Error(ErrorCode::invalid_lattice_parameter, "L_2d needs d >= 1");
  const auto u = gram_U().gram();
  const auto e8 = scaled(gram_E8().gram(), -1);
  Matrix<Rational> line(1, 1);
  line(0, 0) = 2 * d;
  return QForm(block_diagonal<Rational>({line, u, u, e8, e8}));
}

TranscendentalSpace build_transcendental(const SymCubicField& field, const std::array<FieldElt, 3>& phi) {
  TranscendentalSpace s{field, phi, QForm(), {}, {}, false, std::nullopt};
  std::vector<Matrix<Rational>> blocks;
  for (int k = 0; k < 3; ++k) {
    if (phi[k].is_zero())
      throw Error(ErrorCode::zero_phi, "phi_" + std::to_string(k + 1) + " is zero");
    if (!(phi[k].field() == field)) throw Error(ErrorCode::field_mismatch, "phi is not in the given field");
    blocks.push_back(phi[k].regular_rep());
    s.patterns[k] = phi[k].sign_pattern();
  }
  s.D = QForm(block_diagonal(blocks));
  s.invariants = form_invariants(s.D);
  std::size_t pos = 0, neg = 0;
  for (const auto& p : s.patterns) {
    pos += static_cast<std::size_t>(p.positives);
    neg += static_cast<std::size_t>(p.negatives);
  }
  s.signature_matches_patterns = s.invariants.signature == Signature{pos, neg};
  const auto& p1 = s.patterns[0];
  if (p1.positives == 1) {
    const std::size_t k = static_cast<std::size_t>(std::find(p1.signs.begin(), p1.signs.end(), 1) - p1.signs.begin());
    if (s.patterns[1].signs[k] == 1) s.chosen_embedding = k;
  }
  return s;
}

CMAction cm_action(const TranscendentalSpace& space, const FieldElt& a) {
  if (a.is_zero()) throw Error(ErrorCode::not_invertible, "CM by zero");
  const Matrix<Rational> r = a.regular_rep();
  CMAction out{a, block_diagonal<Rational>({r, r, r}), false};
  const Matrix<Rational> r2 = (a * a).regular_rep();
  const Matrix<Rational> m2 = block_diagonal<Rational>({r2, r2, r2});
  const Matrix<Rational>& d = space.D.gram();
  out.identity_holds = out.m.transpose() * d * out.m == d * m2;
  return out;
}

bool is_cup_preserving(const TranscendentalSpace&, const FieldElt& a) {
  if (a.is_zero()) throw Error(ErrorCode::not_invertible, "CM by zero");
  return (a * a).is_rational();
}

PeriodVector solve_period(const TranscendentalSpace& space, const Rational& t, unsigned bits) {
  const PeriodConstants c = period_constants(space, bits);
  if (t == 0) throw Error(ErrorCode::t_out_of_range, "t = 0 makes x2 real");
  const unsigned work = bits + 32;
  const Interval t_iv(t);
  const Interval slack = c.q1 - Interval(t * t) * c.q2;
  if (!slack.is_positive())
    throw Error(ErrorCode::t_out_of_range, "need t^2 < q1/q2 strictly (t = " + to_string(t) + ")");
  const Interval ratio = (Interval(t * t) * c.q2 - c.q1) / c.q3;
  if (!ratio.is_positive()) throw Error(ErrorCode::t_out_of_range, "x3 would vanish");

  PeriodVector pv;
  pv.t = t;
  pv.precision_bits = bits;
  pv.embedding = c.k;
  pv.q1 = c.q1;
  pv.q2 = c.q2;
  pv.q3 = c.q3;
  pv.x3 = sqrt(ratio.round_out(work), work);
  const Interval zero(Rational(0));
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      pv.symbolic[3 * j + i] = "b" + std::to_string(i + 1) + "*x" + std::to_string(j + 1);
      const Interval& b = c.sb[i];
      ComplexInterval x;
      if (j == 0) x = {b, zero};
      else if (j == 1) x = {zero, t_iv * b};
      else x = {pv.x3 * b, zero};
      pv.v[3 * j + i] = x.round_out(work);
    }
  const Matrix<Rational>& d = space.D.gram();
  pv.residual = bilinear(d, pv.v, pv.v);
  std::array<ComplexInterval, 9> vbar;
  for (int i = 0; i < 9; ++i) vbar[i] = pv.v[i].conj();
  const ComplexInterval herm = bilinear(d, vbar, pv.v);
  pv.hermitian = herm.re;
  pv.two_q2_t2 = Rational(2) * (Interval(t * t) * c.q2);
  pv.two_q1 = Rational(2) * c.q1;
  pv.residual_bound = pv.residual.re.magnitude() + pv.residual.im.magnitude();
  pv.residual_ok = pv.residual_bound < Rational(Integer(1), Integer("10000000000000000000000000"));
  auto overlaps = [](const Interval& a, const Interval& b) { return !a.disjoint_from(b); };
  pv.hermitian_contains_two_q2_t2 = overlaps(pv.hermitian, pv.two_q2_t2) && herm.im.contains_zero();
  pv.hermitian_contains_two_q1 = overlaps(pv.hermitian, pv.two_q1) && herm.im.contains_zero();
  pv.hermitian_positive = pv.hermitian.is_positive();
  return pv;
}

Rational default_period_parameter(const TranscendentalSpace& space) {
  const PeriodConstants c = period_constants(space, 64);
  const double bound = std::sqrt(to_double(c.q1.lo()) / to_double(c.q2.hi()));
  long hundredths = static_cast<long>(std::floor(0.99 * bound * 100));
  if (hundredths < 1) return Rational(Integer(1), Integer(1000));
  return Rational(Integer(hundredths), Integer(100));
}

ComplementCertificate embeds_in_k3(const TranscendentalSpace& space, long d) {
  return complement_for_embedding(space.D, gram_L2d(d));
}

HodgeIsometryReport hodge_vs_isometry(const TranscendentalSpace& space, const std::optional<FieldElt>& witness,
                                      const std::optional<PeriodVector>& period, int sweep_height) {
  HodgeIsometryReport r;
  const FieldElt a = witness ? *witness : space.field.alpha();
  r.witness = a.to_string();
  r.irrational_witness = !a.is_rational();
  const CMAction cm = cm_action(space, a);
  r.cm_identity_exact = cm.identity_holds;
  r.cm_invertible = determinant(cm.m) != 0;
  r.witness_cup_preserving = is_cup_preserving(space, a);
  r.sweep_height = sweep_height;
  r.sweep_failures = rational_square_sweep(space.field, sweep_height);

  std::optional<PeriodVector> pv = period;
  if (!pv && valid_pattern(space)) pv = solve_period(space, default_period_parameter(space));
  if (pv) {
    r.period_checked = true;
    const unsigned work = pv->precision_bits + 32;
    const Interval sa = a.conjugate(pv->embedding, work);
    auto mv = mat_vec(cm.m, pv->v);
    for (std::size_t i = 0; i < 9; ++i) mv[i] = mv[i] - sa * pv->v[i];
    r.period_scaled = all_contain_zero(mv);
    const Matrix<Rational> dm = space.D.gram() * cm.m;
    auto lhs = mat_vec(dm, pv->v);
    auto dv = mat_vec(space.D.gram(), pv->v);
    for (std::size_t i = 0; i < 9; ++i) lhs[i] = lhs[i] - sa * dv[i];
    r.complement_preserved = all_contain_zero(lhs);
  }
  r.established = r.irrational_witness && r.cm_identity_exact && r.cm_invertible && r.period_checked &&
                  r.period_scaled && r.complement_preserved && !r.witness_cup_preserving && r.sweep_failures == 0;
  return r;
}

}  // namespace k3ks

#include "k3ks/kugasatake.hpp"

#include <cctype>
#include <functional>

#include "k3ks/error.hpp"

namespace k3ks {

namespace {

using FC = FieldCliffordElt;

void accumulate(FC& acc, Mask m, const FieldElt& c) {
  auto it = acc.find(m);
  if (it == acc.end()) {
    if (!c.is_zero()) acc.emplace(m, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) acc.erase(it);
}


FC fc_mul(const FC& a, const FC& b, const QClifford& alg) {
  FC out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      const QElt prod = alg.monomial(ma, Rational(1)) * alg.monomial(mb, Rational(1));
      const FieldElt cc = ca * cb;
      for (const auto& [m, q] : prod.terms()) accumulate(out, m, q * cc);
    }
  return out;
}

// Rational element from the coefficient of A^k in each field coefficient.
QElt component(const FC& x, std::size_t k, const std::shared_ptr<const QClifford>& alg) {
  std::map<Mask, Rational> t;
  for (const auto& [m, c] : x)
    if (c.coords()[k] != 0) t.emplace(m, c.coords()[k]);
  return QElt(alg, std::move(t));
}

bool block_diagonal_333(const Matrix<Rational>& b) {
  if (b.rows() != 9) return false;
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j)
      if (i / 3 != j / 3 && b(i, j) != 0) return false;
  return true;
}

bool is_diagonal(const Matrix<Rational>& b) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (i != j && b(i, j) != 0) return false;
  return true;
}

// Signature of a symmetric rational matrix by congruence elimination.
Signature signature_of(Matrix<Rational> m) {
  const std::size_t n = m.rows();
  Signature s;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && m(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv == n) {
      // All remaining diagonal entries vanish: make one nonzero with e_i += e_j.
      std::size_t a = n, b = n;
      for (std::size_t i = 0; i < n && a == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && m(i, j) != 0) {
            a = i;
            b = j;
            break;
          }
      if (a == n) break;  // the rest is zero
      for (std::size_t k = 0; k < n; ++k) m(a, k) += m(b, k);
      for (std::size_t k = 0; k < n; ++k) m(k, a) += m(k, b);
      piv = a;
    }
    const Rational d = m(piv, piv);
    done[piv] = true;
    if (d > 0) ++s.positive;
    else ++s.negative;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || m(i, piv) == 0) continue;
      const Rational f = m(i, piv) / d;
      for (std::size_t k = 0; k < n; ++k) m(i, k) -= f * m(piv, k);
      for (std::size_t k = 0; k < n; ++k) m(k, i) -= f * m(k, piv);
    }
  }
  return s;
}

Matrix<Rational> operator_matrix(const std::vector<Mask>& basis, const std::function<QElt(const QElt&)>& f,
                                 const QClifford& alg) {
  const std::size_t n = basis.size();
  std::map<Mask, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[basis[i]] = i;
  Matrix<Rational> out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const QElt img = f(alg.monomial(basis[c], Rational(1)));
    for (const auto& [m, q] : img.terms()) {
      auto it = pos.find(m);
      if (it == pos.end()) throw Error(ErrorCode::parity_violation, "operator leaves the even part");
      out(it->second, c) = q;
    }
  }
  return out;
}

// Scalar value of a grade-zero element; throws when x has other terms.
Rational scalar_part(const QElt& x, const char* what) {
  for (const auto& [m, c] : x.terms())
    if (m != 0) throw Error(ErrorCode::internal, std::string(what) + " is not a scalar");
  return x.coeff(0);
}

// Finds m with p == m * g; g nonzero.
std::optional<Rational> multiple_of(const Matrix<Rational>& p, const Matrix<Rational>& g) {
  std::optional<Rational> m;
  for (std::size_t i = 0; i < g.rows() && !m; ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (g(i, j) != 0) {
        m = p(i, j) / g(i, j);
        break;
      }
  if (!m) return std::nullopt;
  if (!(Rational(*m) * g == p)) return std::nullopt;
  return m;
}

}  // namespace

std::string to_string(const FieldCliffordElt& x) {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : x) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")";
    if (m != 0) s += "*" + monomial_label(m);
  }
  return s;
}

std::string to_string(RelationConvention c) {
  return c == RelationConvention::polar ? "polar" : "quadratic-coefficients";
}

RelationConvention parse_relation_convention(const std::string& s) {
  if (s == "polar") return RelationConvention::polar;
  if (s == "quadratic-coefficients" || s == "quadratic_coefficients" || s == "quadratic")
    return RelationConvention::quadratic_coefficients;
  throw Error(ErrorCode::malformed_input, "unknown relation convention '" + s + "'");
}

Matrix<Rational> relation_form(const Matrix<Rational>& d, RelationConvention c) {
  if (!d.is_symmetric()) throw Error(ErrorCode::asymmetric_matrix, "relation matrix is not symmetric");
  if (c == RelationConvention::polar) return d;
  Matrix<Rational> b = d;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j) b(i, j) = d(i, j) / 2;
  return b;
}

SymbolicPeriodProduct expand_f1f2(const SymCubicField& field, const std::shared_ptr<const QClifford>& algebra) {
  if (!block_diagonal_333(algebra->gram()))
    throw Error(ErrorCode::not_block_diagonal, "expansion needs a 9x9 form that is block diagonal in 3+3+3");
  SymbolicPeriodProduct out{{}, {}, field, algebra};
  const auto b = field.b_basis();
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 3; ++i) out.u[k].emplace(Mask{1} << (3 * k + i), b[i]);
  const QClifford& alg = *algebra;
  const auto& u = out.u;
  out.coefficient["x1i"] = fc_mul(u[0], u[1], alg);
  out.coefficient["x2i"] = fc_mul(u[0], u[2], alg);
  out.coefficient["x1r*x1i"] = fc_mul(u[1], u[1], alg);
  out.coefficient["x1r*x2i"] = fc_mul(u[1], u[2], alg);
  out.coefficient["x2r*x1i"] = fc_mul(u[2], u[1], alg);
  out.coefficient["x2r*x2i"] = fc_mul(u[2], u[2], alg);
  return out;
}

const std::array<std::string, 3>& printed_generators() {
  static const std::array<std::string, 3> g = {
      "e1e4 + e2e6 + e3e5 + e1e5 + e2e4",
      "e2e5 + e1e6 + e3e4 - e2e6 - e3e5",
      "-e1e5 - e2e4 + e2e5 - e2e6 - e3e5 + e3e6",
  };
  return g;
}

QElt parse_clifford(const std::string& text, const std::shared_ptr<const QClifford>& algebra) {
  QElt out = algebra->zero();
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::malformed_input, "cannot parse Clifford element '" + text + "': " + why);
  };
  bool first = true;
  skip();
  if (i == text.size()) fail("empty");
  while (i < text.size()) {
    int sgn = 1;
    if (text[i] == '+' || text[i] == '-') {
      sgn = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      fail("expected + or -");
    }
    first = false;
    Rational coeff(1);
    std::size_t start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
    const bool has_number = i > start;
    if (has_number) {
      coeff = parse_rational(text.substr(start, i - start));
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      }
    }
    QElt term = algebra->scalar(Rational(sgn) * coeff);
    bool has_gen = false;
    while (i < text.size() && text[i] == 'e') {
      ++i;
      start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) fail("generator index missing");
      const long idx = std::stol(text.substr(start, i - start));
      if (idx < 1 || static_cast<std::size_t>(idx) > algebra->n()) fail("generator index out of range");
      term = term * algebra->generator(static_cast<std::size_t>(idx - 1));
      has_gen = true;
    }
    if (!has_number && !has_gen) fail("empty term");
    out = out + term;
    skip();
  }
  return out;
}

GeneratorSet build_generators(const SymbolicPeriodProduct& product) {
  GeneratorSet gs;
  const auto& alg = product.algebra;
  const FC* sources[3] = {&product.coefficient.at("x1i"), &product.coefficient.at("x1r*x2i"),
                          &product.coefficient.at("x2i")};
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t k = 0; k < 3; ++k) gs.g[3 * s + k] = component(*sources[s], 2 - k, alg);
  gs.golden_ok = true;
  for (std::size_t k = 0; k < 3; ++k)
    if (!(gs.g[k] == parse_clifford(printed_generators()[k], alg))) gs.golden_ok = false;
  const SymCubicField& f = product.field;
  const auto b = f.b_basis();
  const FieldElt a = f.alpha();
  gs.identities_ok = a * b[1] == a * a - f.one() && b[1] * b[1] == a + f.one();
  if (!gs.golden_ok && f == SymCubicField::reference())
    throw Error(ErrorCode::golden_mismatch, "generators differ from the printed ones: G1 = " + gs.g[0].to_string());
  return gs;
}

KSRankReport run_prop51(const KSRankConfig& config) {
  const SymCubicField& field = config.field;
  const std::array<FieldElt, 3> phi = config.phi ? *config.phi : field.b_basis();
  const TranscendentalSpace space = build_transcendental(field, phi);
  const Matrix<Rational>& d = space.D.gram();

  auto ranks_for = [&](RelationConvention c, GeneratorSet* keep) {
    const auto alg = QClifford::make(relation_form(d, c));
    const GeneratorSet gs = build_generators(expand_f1f2(field, alg));
    if (keep) *keep = gs;
    std::vector<RankReport> out;
    for (const auto& pol : config.policies) out.push_back(rank_report(gs.as_vector(), pol, config.prime, config.threads));
    return out;
  };

  KSRankReport r;
  r.convention = config.convention;
  GeneratorSet gs;
  r.ranks = ranks_for(config.convention, &gs);
  for (std::size_t i = 0; i < 9; ++i) r.generators[i] = gs.g[i].to_string();
  r.golden_ok = gs.golden_ok;
  r.identities_ok = gs.identities_ok;
  if (config.include_alternate) {
    const RelationConvention alt = config.convention == RelationConvention::polar
                                       ? RelationConvention::quadratic_coefficients
                                       : RelationConvention::polar;
    r.alternate_convention = alt;
    r.alternate_ranks = ranks_for(alt, nullptr);
  }
  return r;
}

ComplexStructure complex_structure(const std::shared_ptr<const QClifford>& algebra, const QElt& f1, const QElt& f2) {
  if (f1.is_zero() || f2.is_zero() || !f1.has_grade(1) || !f2.has_grade(1))
    throw Error(ErrorCode::not_grade_one, "f1 and f2 must be nonzero vectors");
  if (!(f1 * f2 + f2 * f1).is_zero()) throw Error(ErrorCode::non_orthogonal_pair, "f1 and f2 are not orthogonal");
  const Rational s1 = scalar_part(f1 * f1, "f1^2");
  const Rational s2 = scalar_part(f2 * f2, "f2^2");
  if (s1 == 0 || s1 != s2)
    throw Error(ErrorCode::bad_square, "need f1^2 = f2^2 != 0 (got " + to_string(s1) + ", " + to_string(s2) + ")");
  ComplexStructure cs;
  cs.algebra = algebra;
  cs.f1 = f1;
  cs.f2 = f2;
  cs.j = (f1 * f2).scaled(1 / s1);
  for (Mask m = 0; m < algebra->dim(); ++m)
    if (__builtin_popcount(m) % 2 == 0) cs.even.push_back(m);
  cs.matrix = operator_matrix(cs.even, [&](const QElt& y) { return cs.j * y; }, *algebra);
  cs.squares_to_minus_one = cs.matrix * cs.matrix == Rational(-1) * Matrix<Rational>::identity(cs.even.size());
  return cs;
}

std::string to_string(PairSelection p) {
  return p == PairSelection::same_sign_as_f ? "same-sign-as-f" : "negative-squares";
}

KSPolarization ks_polarization(const ComplexStructure& cs, PairSelection selection) {
  const QClifford& alg = *cs.algebra;
  const Matrix<Rational>& g = alg.gram();
  if (!is_diagonal(g)) throw Error(ErrorCode::not_block_diagonal, "polarization needs a diagonal form");
  const int want = selection == PairSelection::same_sign_as_f ? sign(scalar_part(cs.f1 * cs.f1, "f1^2")) : -1;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < alg.n() && idx.size() < 2; ++i)
    if (sign(g(i, i)) == want) idx.push_back(i);
  if (idx.size() < 2)
    throw Error(ErrorCode::missing_polarization_pair,
                "no two generators with squares of sign " + std::to_string(want));

  KSPolarization pol;
  pol.selection = selection;
  pol.pair = {idx[0], idx[1]};
  const QElt pair = alg.generator(idx[0]) * alg.generator(idx[1]);
  const std::size_t n = cs.even.size();
  // E for s = +1; the s = -1 form is its negative.
  Matrix<Rational> e(n, n);
  std::vector<QElt> basis;
  for (Mask m : cs.even) basis.push_back(alg.monomial(m, Rational(1)));
  std::vector<QElt> rev;
  for (const auto& x : basis) rev.push_back(pair * x.reverse());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) e(a, b) = (rev[a] * basis[b]).trace_right_mult();

  for (int k = 0; k < 2; ++k) {
    const int s = k == 0 ? 1 : -1;
    const Matrix<Rational> es = Rational(s) * e * cs.matrix;
    SignCandidate& c = pol.candidates[static_cast<std::size_t>(k)];
    c.sign = s;
    c.symmetric = es == es.transpose();
    c.signature = signature_of(es);
    c.positive_definite = c.symmetric && is_positive_definite(es);
    if (c.positive_definite && !pol.sign) pol.sign = s;
  }
  const Rational s(pol.sign.value_or(1));
  pol.e = s * e;
  pol.e_j = pol.e * cs.matrix;
  pol.skew = pol.e == Rational(-1) * pol.e.transpose();
  pol.j_invariant = cs.matrix.transpose() * pol.e * cs.matrix == pol.e;
  return pol;
}

EmbeddingV embed_V(const ComplexStructure& cs, const QElt& e) {
  if (e.is_zero() || !e.is_odd()) throw Error(ErrorCode::parity_violation, "e must be a nonzero odd element");
  e.inverse();  // throws not_invertible
  const QClifford& alg = *cs.algebra;
  EmbeddingV emb;
  emb.e = e;
  const std::size_t n = alg.n();
  for (std::size_t i = 0; i < n; ++i) {
    const QElt v = alg.generator(i);
    emb.phi.push_back(operator_matrix(cs.even, [&](const QElt& x) { return v * x * e; }, alg));
  }
  const QElt jinv = cs.j.inverse();
  emb.rho = Matrix<Rational>(n, n);
  emb.rho_preserves_v = true;
  std::vector<QElt> images;
  for (std::size_t i = 0; i < n; ++i) {
    const QElt img = cs.j * alg.generator(i) * jinv;
    images.push_back(img);
    if (!img.is_zero() && !img.has_grade(1)) {
      emb.rho_preserves_v = false;
      continue;
    }
    for (const auto& [m, c] : img.terms()) emb.rho(static_cast<std::size_t>(__builtin_ctz(m)), i) = c;
  }
  Matrix<Rational> jinv_m;
  if (!invert(cs.matrix, jinv_m)) throw Error(ErrorCode::not_invertible, "J is singular");
  emb.equivariant = emb.rho_preserves_v;
  for (std::size_t i = 0; i < n; ++i) {
    emb.literal_commutes.push_back(emb.phi[i] * cs.matrix == cs.matrix * emb.phi[i]);
    if (!emb.rho_preserves_v) continue;
    Matrix<Rational> rhs(cs.even.size(), cs.even.size());
    for (std::size_t k = 0; k < n; ++k)
      if (emb.rho(k, i) != 0) rhs = rhs + emb.rho(k, i) * emb.phi[k];
    if (!(cs.matrix * emb.phi[i] * jinv_m == rhs)) emb.equivariant = false;
  }
  return emb;
}

namespace {

Matrix<Rational> pairing_matrix(const std::vector<Matrix<Rational>>& phi, const Matrix<Rational>& m,
                                const Matrix<Rational>& m_inv) {
  const std::size_t n = phi.size();
  Matrix<Rational> p(n, n);
  std::vector<Matrix<Rational>> right;
  for (const auto& f : phi) right.push_back(m_inv * f.transpose() * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix<Rational> prod = phi[i] * right[j];
      Rational tr(0);
      for (std::size_t k = 0; k < prod.rows(); ++k) tr += prod(k, k);
      p(i, j) = tr;
    }
  return p;
}

}  // namespace

PullbackReport pullback_check(const KSPolarization& pol, const EmbeddingV& emb, const ComplexStructure& cs,
                              const std::vector<QElt>& right_factors) {
  const Matrix<Rational>& gram = cs.algebra->gram();
  Matrix<Rational> m_inv;
  if (!invert(pol.e, m_inv)) throw Error(ErrorCode::not_invertible, "polarization form is degenerate");
  PullbackReport r;
  r.pairing = pairing_matrix(emb.phi, pol.e, m_inv);
  const auto mult = multiple_of(r.pairing, gram);
  if (!mult) throw Error(ErrorCode::not_proportional, "pulled-back pairing is not a multiple of the form");
  r.proportional = true;
  r.multiple_of_gram = *mult;
  r.lambda = -*mult;
  r.lambda_positive = r.lambda > 0;
  // psi_V(x, C y) with psi_V = -gram and C = rho.
  const Matrix<Rational> weil = Rational(-1) * gram * emb.rho;
  r.weil_positive = emb.rho_preserves_v && weil == weil.transpose() && is_positive_definite(weil);

  for (const auto& g : right_factors) {
    PullbackReport::Variant v;
    v.g = g.to_string();
    const EmbeddingV other = embed_V(cs, emb.e * g);
    const auto m2 = multiple_of(pairing_matrix(other.phi, pol.e, m_inv), gram);
    if (m2) {
      v.proportional = true;
      v.lambda = -*m2;
      v.same_class = r.lambda != 0 && v.lambda / r.lambda > 0;
    }
    r.right_multiplied.push_back(v);
  }
  return r;
}

SmallKSInstance run_small_instance(PairSelection selection) {
  Matrix<Rational> g(4, 4);
  g(0, 0) = 1;
  g(1, 1) = 1;
  g(2, 2) = -1;
  g(3, 3) = -1;
  const auto alg = QClifford::make(g);
  SmallKSInstance s;
  s.cs = complex_structure(alg, alg->generator(0), alg->generator(1));
  s.polarization = ks_polarization(s.cs, selection);
  s.embedding = embed_V(s.cs, alg->generator(2));
  if (s.polarization.sign) {
    const std::vector<QElt> factors = {alg->scalar(Rational(2)) + alg->generator(0) * alg->generator(1),
                                       alg->scalar(Rational(2)) + alg->generator(1) * alg->generator(3)};
    s.pullback = pullback_check(s.polarization, s.embedding, s.cs, factors);
  }
  return s;
}

}  // namespace k3ks

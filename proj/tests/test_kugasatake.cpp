#include <doctest.h>

#include "k3ks/error.hpp"
#include "k3ks/kugasatake.hpp"
#include "oracles/algebra_oracle.hpp"

using namespace k3ks;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

std::shared_ptr<const QClifford> small_algebra() { return QClifford::make(QForm::diagonal({1, 1, -1, -1}).gram()); }

}  // namespace

TEST_CASE("complex structure on the n = 4 instance") {
  const auto alg = small_algebra();
  const auto cs = complex_structure(alg, alg->generator(0), alg->generator(1));
  CHECK(cs.squares_to_minus_one);
  CHECK(cs.even.size() == 8);
  CHECK(cs.matrix * cs.matrix == -Matrix<Rational>::identity(8));
  CHECK(cs.j * cs.j == alg->scalar(-1));
}

TEST_CASE("complex structure at n = 3") {
  const auto alg = QClifford::make(QForm::diagonal({1, 1, -1}).gram());
  const auto cs = complex_structure(alg, alg->generator(0), alg->generator(1));
  CHECK(cs.even.size() == 4);
  CHECK(cs.squares_to_minus_one);
  // Only e3 has a negative square, so no negative pair exists.
  CHECK(code_of([&] { ks_polarization(cs, PairSelection::negative_squares); }) ==
        ErrorCode::missing_polarization_pair);
}

TEST_CASE("complex structure errors") {
  const auto alg = small_algebra();
  const QElt e1 = alg->generator(0), e2 = alg->generator(1);
  CHECK(code_of([&] { complex_structure(alg, e1 * e2, e2); }) == ErrorCode::not_grade_one);
  CHECK(code_of([&] { complex_structure(alg, e1, e1 + e2); }) == ErrorCode::non_orthogonal_pair);
  CHECK(code_of([&] { complex_structure(alg, e1, alg->generator(2)); }) == ErrorCode::bad_square);
}

TEST_CASE("polarization on the n = 4 instance") {
  const auto alg = small_algebra();
  const auto cs = complex_structure(alg, alg->generator(0), alg->generator(1));
  const auto pol = ks_polarization(cs);
  REQUIRE(pol.sign.has_value());
  CHECK(pol.skew);
  CHECK(pol.j_invariant);
  // Independent check of definiteness by floating eigenvalues.
  std::vector<std::vector<double>> m(8, std::vector<double>(8));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m[i][j] = to_double(pol.e_j(i, j));
  const auto [pos, neg] = oracle::float_signature(m);
  CHECK(pos == 8);
  CHECK(neg == 0);
  // The negative-square pair yields an indefinite form for both signs.
  const auto alt = ks_polarization(cs, PairSelection::negative_squares);
  CHECK_FALSE(alt.sign.has_value());
  for (const auto& c : alt.candidates) CHECK_FALSE(c.positive_definite);
}

TEST_CASE("embedding of V") {
  const auto alg = small_algebra();
  const auto cs = complex_structure(alg, alg->generator(0), alg->generator(1));
  const auto emb = embed_V(cs, alg->generator(2));
  CHECK(emb.rho_preserves_v);
  CHECK(emb.equivariant);
  REQUIRE(emb.literal_commutes.size() == 4);
  // Phi_v commutes with J exactly when v commutes with e1 e2.
  CHECK_FALSE(emb.literal_commutes[0]);
  CHECK_FALSE(emb.literal_commutes[1]);
  CHECK(emb.literal_commutes[2]);
  CHECK(emb.literal_commutes[3]);
  // Phi is linear in v, so v = 0 gives the zero map.
  for (const auto& p : emb.phi) CHECK(p.rows() == 8);
  const QElt v0 = alg->vector({0, 0, 0, 0});
  for (Mask m : cs.even) CHECK((v0 * alg->monomial(m, 1) * emb.e).is_zero());
  CHECK(emb.phi[0] + emb.phi[1] != emb.phi[0]);
  CHECK(code_of([&] { embed_V(cs, alg->generator(0) * alg->generator(2)); }) == ErrorCode::parity_violation);
}

TEST_CASE("Phi of e1 fixes the unit when e = e1") {
  const auto alg = small_algebra();
  const auto cs = complex_structure(alg, alg->generator(0), alg->generator(1));
  const auto emb = embed_V(cs, alg->generator(0));
  // Phi_{e1}(1) = e1 * 1 * e1 = e1^2 = 1; the unit is the first even basis vector.
  REQUIRE(cs.even[0] == 0);
  CHECK(emb.phi[0](0, 0) == 1);
  for (std::size_t i = 1; i < 8; ++i) CHECK(emb.phi[0](i, 0) == 0);
}

TEST_CASE("pullback is a positive multiple of the weight-two form") {
  for (auto sel : {PairSelection::same_sign_as_f}) {
    const auto s = run_small_instance(sel);
    CHECK(s.pullback.proportional);
    CHECK(s.pullback.multiple_of_gram == -8);
    CHECK(s.pullback.lambda == 8);
    CHECK(s.pullback.lambda_positive);
    CHECK(s.pullback.weil_positive);
    REQUIRE(s.pullback.right_multiplied.size() == 2);
    for (const auto& v : s.pullback.right_multiplied) {
      CHECK(v.proportional);
      CHECK(v.same_class);
      CHECK(v.lambda > 0);
    }
  }
}

TEST_CASE("default run_prop51 is reproducible") {
  KSRankConfig cfg;
  cfg.policies = {WordPolicy::three_fold()};
  cfg.include_alternate = false;
  const auto r = run_prop51(cfg);
  CHECK(r.golden_ok);
  REQUIRE(r.ranks.size() == 1);
  CHECK(r.ranks[0].words == 729);
  CHECK(r.ranks[0].rank == 163);
  cfg.convention = RelationConvention::polar;
  CHECK(run_prop51(cfg).ranks[0].rank == 64);
}

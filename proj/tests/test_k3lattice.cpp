#include <doctest.h>

#include <random>

#include "k3ks/error.hpp"
#include "k3ks/k3lattice.hpp"
#include "oracles/algebra_oracle.hpp"

using namespace k3ks;

namespace {

std::vector<std::vector<double>> to_double_rows(const Matrix<Rational>& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = to_double(m(i, j));
  return out;
}

bool even(const QForm& q) {
  for (std::size_t i = 0; i < q.dim(); ++i)
    if (q.gram()(i, i).get_den() != 1 || q.gram()(i, i).get_num() % 2 != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("E8 and the unimodular K3 lattice") {
  const QForm e8 = gram_E8();
  CHECK(e8.determinant() == 1);
  CHECK(even(e8));
  CHECK(oracle::float_signature(to_double_rows(e8.gram())) == std::pair<std::size_t, std::size_t>{8, 0});
  const QForm l0 = gram_L0();
  CHECK(l0.dim() == 22);
  CHECK(abs(l0.determinant()) == 1);
  CHECK(even(l0));
  CHECK(oracle::float_signature(to_double_rows(l0.gram())) == std::pair<std::size_t, std::size_t>{3, 19});
}

TEST_CASE("polarised lattices") {
  for (long d : {1L, 2L, 5L}) {
    const QForm l = gram_L2d(d);
    CHECK(l.dim() == 21);
    CHECK(l.gram()(0, 0) == 2 * d);
    for (std::size_t j = 1; j < 21; ++j) CHECK(l.gram()(0, j) == 0);
    CHECK(abs(l.determinant()) == 2 * d);
    CHECK(form_invariants(l).signature == Signature{3, 18});
  }
  CHECK_THROWS_AS(gram_L2d(0), Error);
}

TEST_CASE("CM identity on random elements") {
  const auto f = SymCubicField::reference();
  const auto space = build_transcendental(f, f.b_basis());
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    auto r = [&] { return oracle::frac(static_cast<long>(rng() % 15) - 7, static_cast<long>(rng() % 3) + 1); };
    const auto a = f.element(r(), r(), r());
    const auto cm = cm_action(space, a);
    CHECK(cm.identity_holds);
    CHECK(cm.m.transpose() * space.D.gram() * cm.m == space.D.gram() * cm_action(space, a * a).m);
  }
  CHECK(is_cup_preserving(space, f.scalar(Rational(5))));
  CHECK_FALSE(is_cup_preserving(space, f.alpha()));
}

TEST_CASE("transcendental space signature matches sign patterns") {
  const auto f = SymCubicField::reference();
  const auto t = search_prop33(f);
  const auto space = build_transcendental(f, t.f);
  CHECK(space.signature_matches_patterns);
  CHECK(space.invariants.signature == Signature{2, 7});
  CHECK(oracle::float_signature(to_double_rows(space.D.gram())) == std::pair<std::size_t, std::size_t>{2, 7});
  // phi = (1, 1, 1) is totally positive: D is positive definite, no period.
  const auto ones = build_transcendental(f, {f.one(), f.one(), f.one()});
  CHECK(ones.invariants.signature == Signature{9, 0});
  CHECK_FALSE(ones.chosen_embedding.has_value());
  try {
    solve_period(ones, Rational(1, 2));
    FAIL("period solved for a positive definite D");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_phi_pattern);
  }
  CHECK_THROWS_AS(build_transcendental(f, {f.zero(), f.one(), f.one()}), Error);
}

TEST_CASE("period vector on the searched triple") {
  const auto f = SymCubicField::reference();
  const auto space = build_transcendental(f, search_prop33(f).f);
  const Rational t = default_period_parameter(space);
  CHECK(t > 0);
  const auto pv = solve_period(space, t, 128);
  CHECK(pv.residual_ok);
  CHECK(pv.residual_bound < Rational(1, Integer("10000000000000000000000000")));
  CHECK(pv.hermitian_contains_two_q2_t2);
  CHECK(pv.hermitian_positive);
  try {
    solve_period(space, Rational(100));
    FAIL("t out of range accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::t_out_of_range);
  }
  const auto rep = hodge_vs_isometry(space, std::nullopt, pv);
  CHECK(rep.established);
  CHECK_FALSE(rep.witness_cup_preserving);
  CHECK(rep.sweep_failures == 0);
}

TEST_CASE("embedding into K3 lattices") {
  const auto f = SymCubicField::reference();
  const auto space = build_transcendental(f, search_prop33(f).f);
  const auto cert = embeds_in_k3(space, 2);
  CHECK(cert.verified);
  CHECK(cert.complement.dim() == 12);
  CHECK(equivalent_over_q(direct_sum(space.D, cert.complement), gram_L2d(2)));
}

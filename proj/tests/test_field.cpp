#include <doctest.h>

#include <random>

#include "k3ks/error.hpp"
#include "k3ks/field.hpp"
#include "oracles/algebra_oracle.hpp"

using namespace k3ks;

namespace {

FieldElt random_elt(const SymCubicField& f, std::mt19937_64& rng, int h = 9) {
  auto r = [&] { return oracle::frac(static_cast<long>(rng() % (2 * h + 1)) - h, static_cast<long>(rng() % 4) + 1); };
  return f.element(r(), r(), r());
}

}  // namespace

TEST_CASE("default field data") {
  const auto f = SymCubicField::reference();
  // x^3 - 2x^2 - x + 1, discriminant 49.
  const auto& c = f.charpoly();
  CHECK(c[0] == 1);
  CHECK(c[1] == -1);
  CHECK(c[2] == -2);
  CHECK(c[3] == 1);
  CHECK(f.discriminant() == 49);
  const auto roots = f.roots(80);
  const auto ref = oracle::cubic_roots(1, -1, -2);
  REQUIRE(roots.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(roots[i].width() < Rational(1, Integer(1) << 79));
    CHECK(std::abs(to_double(roots[i].midpoint()) - ref[i]) < 1e-12);
  }
}

TEST_CASE("field construction errors") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::internal;
  };
  CHECK(code_of([] { SymCubicField::make({{1, 2, 0}, {0, 1, 0}, {0, 0, 1}}); }) == ErrorCode::asymmetric_matrix);
  CHECK(code_of([] { SymCubicField::make({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}); }) == ErrorCode::reducible_charpoly);
  CHECK(code_of([] { SymCubicField::reference().zero().inverse(); }) == ErrorCode::inverse_of_zero);
}

TEST_CASE("field arithmetic against regular representations") {
  const auto f = SymCubicField::reference();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const FieldElt x = random_elt(f, rng), y = random_elt(f, rng);
    CHECK((x * y).regular_rep() == x.regular_rep() * y.regular_rep());
    CHECK((x + y).regular_rep() == x.regular_rep() + y.regular_rep());
    CHECK(x.regular_rep().is_symmetric());
    if (!x.is_zero()) CHECK(x * x.inverse() == f.one());
  }
  // The defining relations of the b-basis.
  const auto a = f.alpha();
  const auto b2 = a * a - a - f.one();
  CHECK(a * b2 == a * a - f.one());
  CHECK(b2 * b2 == a + f.one());
}

TEST_CASE("b-basis diagonalises the action") {
  const auto f = SymCubicField::reference();
  const auto b = f.b_basis();
  CHECK(b[2] == f.one());
  const auto& A = f.matrix();
  for (int j = 0; j < 3; ++j) {
    FieldElt rhs = f.zero();
    for (int i = 0; i < 3; ++i) rhs = rhs + Rational(A(i, j)) * b[i];
    CHECK(f.alpha() * b[j] == rhs);
  }
}

TEST_CASE("conjugates and sign patterns") {
  const auto f = SymCubicField::reference();
  const auto ref = oracle::cubic_roots(1, -1, -2);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const FieldElt x = random_elt(f, rng);
    const auto conj = x.conjugates(60);
    const auto& c = x.coords();
    for (int k = 0; k < 3; ++k) {
      const double r = ref[k];
      const double want = to_double(c[0]) + to_double(c[1]) * r + to_double(c[2]) * r * r;
      CHECK(std::abs(to_double(conj[k].midpoint()) - want) < 1e-9);
    }
    const auto sp = x.sign_pattern();
    CHECK(sp.positives + sp.negatives == (x.is_zero() ? 0 : 3));
  }
  // phi = (1, 1, 1): the identity element is totally positive.
  CHECK(f.one().sign_pattern().positives == 3);
}

TEST_CASE("searched triple satisfies its own conditions") {
  const auto f = SymCubicField::reference();
  const auto t = search_prop33(f);
  std::size_t emb = 99;
  CHECK(satisfies_sign_conditions(t.f, Rational(1, 2), &emb));
  CHECK(emb == t.embedding);
  CHECK(t.patterns[0] == t.f[0].sign_pattern());
  CHECK(t.patterns[0].positives == 1);
  CHECK(t.patterns[1].positives == 1);
  CHECK(t.patterns[2].negatives == 3);
  // The search is deterministic.
  const auto again = search_prop33(f);
  for (int i = 0; i < 3; ++i) CHECK(again.f[i] == t.f[i]);
}

TEST_CASE("search exhaustion is reported") {
  SearchOptions tiny;
  tiny.height = 1;
  tiny.max_den = 1;
  tiny.epsilon = Rational(1, 1000);
  try {
    search_prop33(SymCubicField::reference(), tiny);
    FAIL("tiny search succeeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::search_exhausted);
  }
}

TEST_CASE("rational square check") {
  const auto f = SymCubicField::reference();
  CHECK(rational_square_check(f.scalar(Rational(3, 7))));
  CHECK(rational_square_check(f.alpha()));
  CHECK(rational_square_sweep(f, 3) == 0);
}

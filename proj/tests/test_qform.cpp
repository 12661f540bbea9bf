#include <doctest.h>

#include <random>

#include "k3ks/error.hpp"
#include "k3ks/interval.hpp"
#include "k3ks/qform.hpp"
#include "oracles/hilbert_oracle.hpp"

using namespace k3ks;

namespace {

std::vector<mpz_class> as_mpz(const std::vector<Integer>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("rational parsing and squarefree classes") {
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(squarefree_class(Rational(-18)) == -2);
  CHECK(squarefree_class(Rational(8, 27)) == 6);
  Rational root;
  CHECK(is_square(Rational(49, 4), &root));
  CHECK(root == Rational(7, 2));
  CHECK_FALSE(is_square(Rational(-4)));
  CHECK_THROWS_AS(parse_rational("1/0"), std::exception);
}

TEST_CASE("interval enclosures") {
  const Interval two(Rational(2));
  const Interval r = sqrt(two, 80);
  CHECK(r.width() < Rational(1, Integer(1) << 70));
  CHECK(square(r).contains(Rational(2)));
  const Interval wide = Interval(Rational(1, 3)).round_out(10);
  CHECK(wide.contains(Rational(1, 3)));
  CHECK(to_decimal(Rational(1, 3), 5, -1) == "3.3333e-1");
  CHECK(to_decimal(Rational(1, 3), 5, 1) == "3.3334e-1");
}

TEST_CASE("QForm construction errors") {
  CHECK_THROWS_AS(QForm(Matrix<Rational>(2, 3)), Error);
  try {
    QForm(Matrix<Rational>{{1, 2}, {3, 4}});
    FAIL("asymmetric accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::asymmetric_matrix);
  }
  CHECK(QForm().dim() == 0);
}

TEST_CASE("diagonalize reports the radical dimension") {
  const QForm u(Matrix<Rational>{{0, 1}, {1, 0}});
  const auto d = diagonalize(u);
  REQUIRE(d.entries.size() == 2);
  CHECK(d.entries[0] * d.entries[1] == -4);
  CHECK(u.change_basis(d.basis).gram() == QForm::diagonal({d.entries[0].get_si(), d.entries[1].get_si()}).gram());
  try {
    diagonalize(QForm::diagonal({1, 0, 0}));
    FAIL("degenerate accepted");
  } catch (const DegenerateFormError& e) {
    CHECK(e.radical_dim() == 2);
  }
}

TEST_CASE("invariants of small forms") {
  const auto inv = form_invariants(QForm::diagonal({1, 1}));
  CHECK(inv.signature == Signature{2, 0});
  CHECK(inv.disc == 1);
  for (const auto& v : inv.places()) CHECK(inv.hasse_at(v) == 1);

  // <-1,-1> is the quaternion norm form: Hasse -1 at the real place and at 2 (i<j).
  const auto q = form_invariants(QForm::diagonal({-1, -1}), HasseConvention::lt);
  CHECK(q.hasse_at(Place::real()) == -1);
  CHECK(q.hasse_at(Place::prime(2)) == -1);
  CHECK(q.hasse_at(Place::prime(3)) == 1);
  // The two conventions differ by (disc, -1).
  const auto qq = form_invariants(QForm::diagonal({-1, -1}), HasseConvention::leq);
  for (const auto& v : qq.places())
    CHECK(qq.hasse_at(v, HasseConvention::leq) ==
          qq.hasse_at(v, HasseConvention::lt) * hilbert_symbol(Rational(qq.disc), Rational(-1), v));
}

TEST_CASE("Place parsing and ordering") {
  CHECK(Place::parse("real") == Place::real());
  CHECK(Place::parse("7").prime() == 7);
  CHECK(Place::real() < Place::prime(2));
  CHECK_THROWS_AS(Place::prime(4), Error);
  CHECK_THROWS_AS(Place::parse("x"), Error);
}

TEST_CASE("Hilbert symbol against the enumeration oracle") {
  for (long p : {2L, 3L, 5L, 7L}) {
    for (long a = -12; a <= 12; ++a)
      for (long b = -12; b <= 12; ++b) {
        if (!a || !b) continue;
        CHECK(hilbert_symbol(Rational(a), Rational(b), Place::prime(p)) == oracle::hilbert_by_enumeration(a, b, p));
      }
  }
  // The squares-mod-p oracle agrees with the enumeration oracle.
  for (long p : {3L, 5L, 11L})
    for (long a = -15; a <= 15; ++a)
      for (long b = -15; b <= 15; ++b)
        if (a && b) CHECK(oracle::hilbert_by_squares(a, b, p) == oracle::hilbert_by_enumeration(a, b, p));
}

TEST_CASE("Hilbert symbol of rationals and large primes") {
  CHECK(hilbert_symbol(Rational(2, 9), Rational(3), Place::prime(3)) ==
        hilbert_symbol(Rational(2), Rational(3), Place::prime(3)));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const long a = static_cast<long>(rng() % 20000) - 10000, b = static_cast<long>(rng() % 20000) - 10000;
    if (!a || !b) continue;
    for (long p : oracle::primes_of({a, b}))
      if (p > 13) CHECK(hilbert_symbol(Rational(a), Rational(b), Place::prime(p)) == oracle::hilbert_by_squares(a, b, p));
  }
  CHECK_THROWS_AS(hilbert_symbol(Rational(0), Rational(1), Place::real()), Error);
}

TEST_CASE("Hasse invariant agrees with the oracle") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    std::vector<long> d;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) d.push_back((static_cast<long>(rng() % 60) + 1) * (rng() % 2 ? 1 : -1));
    std::vector<Integer> di(d.begin(), d.end());
    for (long p : oracle::primes_of(as_mpz(di)))
      CHECK(hasse_invariant(di, Place::prime(p), HasseConvention::lt) == oracle::hasse_lt(as_mpz(di), p));
  }
}

TEST_CASE("direct sum and equivalence") {
  const QForm a = QForm::diagonal({1, 2}), b = QForm::diagonal({-3});
  CHECK(direct_sum(a, b).dim() == 3);
  CHECK(direct_sum(a, QForm()).gram() == a.gram());
  // <1,1> ~ <2,2> (2 = 1^2 + 1^2), <1,1> !~ <1,3>.
  CHECK(equivalent_over_q(QForm::diagonal({1, 1}), QForm::diagonal({2, 2})));
  CHECK_FALSE(equivalent_over_q(QForm::diagonal({1, 1}), QForm::diagonal({1, 3})));
  CHECK(equivalent_over_q(QForm(Matrix<Rational>{{0, 1}, {1, 0}}), QForm::diagonal({1, -1})));
}

TEST_CASE("local classes and local forms") {
  CHECK(least_nonresidue(7) == 3);
  CHECK(local_class(Rational(3), 7).nonresidue_unit);
  CHECK(local_class(Rational(14), 7).odd_valuation);
  CHECK(dyadic_class(Rational(12)).unit_mod8 == 3);
  for (long p : {3L, 5L, 13L})
    for (int h : {1, -1})
      for (bool ov : {false, true})
        for (bool nr : {false, true}) {
          const LocalClass want{ov, nr};
          const QForm f = build_local_form(p, want, h, HasseConvention::lt);
          CHECK(f.dim() == 4);
          const auto inv = form_invariants(f, HasseConvention::lt);
          CHECK(local_class(Rational(inv.disc), p) == want);
          CHECK(inv.hasse_at(Place::prime(p)) == h);
        }
  for (unsigned u : {1u, 3u, 5u, 7u})
    for (int h : {1, -1}) {
      const DyadicClass want{false, u};
      const auto inv = form_invariants(build_dyadic_form(want, h, HasseConvention::lt), HasseConvention::lt);
      CHECK(dyadic_class(Rational(inv.disc)) == want);
      CHECK(inv.hasse_at(Place::prime(2)) == h);
    }
}

TEST_CASE("complement errors are distinct") {
  try {
    complement_for_embedding(QForm::diagonal({1, 1}), QForm::diagonal({1, 1, 1}));
    FAIL("codimension 1 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::codimension_too_small);
  }
  try {
    complement_for_embedding(QForm::diagonal({-1, -1}), QForm::diagonal({1, 1, 1, 1, 1, -1}));
    FAIL("real obstruction missed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::real_obstruction);
  }
}

TEST_CASE("complement certificates checked independently") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 25; ++t) {
    const int n1 = 1 + static_cast<int>(rng() % 4), n2 = n1 + 4 + static_cast<int>(rng() % 3);
    std::vector<long> a, b;
    int p1 = 0, m1 = 0;
    for (int i = 0; i < n1; ++i) {
      long x = static_cast<long>(rng() % 30) + 1;
      if (rng() % 2) {
        x = -x;
        ++m1;
      } else {
        ++p1;
      }
      a.push_back(x);
    }
    int p2 = p1 + static_cast<int>(rng() % 3), m2 = m1;
    while (p2 + m2 < n2) (rng() % 2 ? p2 : m2)++;
    for (int i = 0; i < n2; ++i) b.push_back((static_cast<long>(rng() % 30) + 1) * (i < p2 ? 1 : -1));
    const auto cert = complement_for_embedding(QForm::diagonal(std::vector<Rational>(a.begin(), a.end())),
                                               QForm::diagonal(std::vector<Rational>(b.begin(), b.end())));
    REQUIRE(cert.verified);
    const auto cd = diagonalize(cert.complement).entries;
    std::vector<mpz_class> sum(a.begin(), a.end());
    for (const auto& x : cd) sum.push_back(x);
    const std::vector<mpz_class> target(b.begin(), b.end());
    mpz_class ds = 1, dt = 1;
    for (const auto& x : sum) ds *= x;
    for (const auto& x : target) dt *= x;
    CHECK(oracle::squarefree(ds) == oracle::squarefree(dt));
    std::set<long> places = oracle::primes_of(sum);
    for (long p : oracle::primes_of(target)) places.insert(p);
    places.insert(0);
    for (long p : places) CHECK(oracle::hasse_lt(sum, p) == oracle::hasse_lt(target, p));
  }
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "k3ks/error.hpp"
#include "k3ks/k3lattice.hpp"
#include "k3ks/kugasatake.hpp"
#include "k3ks/rank.hpp"
#include "oracles/algebra_oracle.hpp"

using namespace k3ks;

namespace {

std::map<std::uint32_t, mpq_class> as_map(const QElt& x) { return {x.terms().begin(), x.terms().end()}; }

QElt random_elt(const std::shared_ptr<const QClifford>& alg, std::mt19937_64& rng, int terms = 6) {
  std::map<Mask, Rational> t;
  for (int i = 0; i < terms; ++i)
    t[static_cast<Mask>(rng() % alg->dim())] += oracle::frac(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1);
  return QElt(alg, t);
}

std::vector<std::vector<std::uint64_t>> dense_rows(const std::vector<QElt>& xs, std::uint64_t p) {
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& x : xs) {
    std::vector<std::uint64_t> r(x.algebra()->dim(), 0);
    for (const auto& [m, c] : x.terms()) r[m] = oracle::rational_mod_p(c, p);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

TEST_CASE("products on a diagonal form match the sign-count rule") {
  const std::vector<Rational> q = {2, -3, Rational(1, 2), 5, -1};
  const auto alg = QClifford::make(QForm::diagonal(q).gram());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const QElt x = random_elt(alg, rng), y = random_elt(alg, rng);
    CHECK(as_map(x * y) == oracle::diagonal_product(as_map(x), as_map(y), std::vector<mpq_class>(q.begin(), q.end())));
  }
}

TEST_CASE("defining relations on a non-diagonal form") {
  const Matrix<Rational> b{{1, Rational(1, 2), 0}, {Rational(1, 2), -2, 3}, {0, 3, 0}};
  const auto alg = QClifford::make(b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const QElt ei = alg->generator(i), ej = alg->generator(j);
      CHECK(ei * ej + ej * ei == alg->scalar(2 * b(i, j)));
    }
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const QElt x = random_elt(alg, rng), y = random_elt(alg, rng), z = random_elt(alg, rng);
    CHECK((x * y) * z == x * (y * z));
    CHECK((x * y).reverse() == y.reverse() * x.reverse());
  }
}

TEST_CASE("quaternions at n = 2") {
  const auto alg = QClifford::make(QForm::diagonal({-1, -1}).gram());
  const QElt i = alg->generator(0), j = alg->generator(1), k = i * j;
  const QElt minus_one = alg->scalar(-1);
  CHECK(i * i == minus_one);
  CHECK(j * j == minus_one);
  CHECK(k * k == minus_one);
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * i == j);
}

TEST_CASE("inverse and trace") {
  const auto alg = QClifford::make(QForm::diagonal({1, 1, -1, -1}).gram());
  const QElt x = alg->scalar(2) + alg->generator(0) * alg->generator(1);
  CHECK(x * x.inverse() == alg->scalar(1));
  // 1 + e1 squares to 2(1 + e1) and is a zero divisor: (1 + e1)(1 - e1) = 0.
  CHECK_THROWS_AS((alg->scalar(1) + alg->generator(0)).inverse(), Error);
  CHECK(alg->scalar(3).trace_right_mult() == 3 * 16);
  CHECK((alg->generator(0) * alg->generator(1)).trace_right_mult() == 0);
}

TEST_CASE("text form round trip") {
  const auto alg = QClifford::make(Matrix<Rational>::identity(9));
  const QElt x = parse_clifford("e1e4 + 2*e2e6 - e3e5 - 1/2*e7", alg);
  CHECK(parse_clifford(x.to_string(), alg) == x);
  CHECK(monomial_label(0) == "1");
  CHECK(monomial_label(0b1001) == "e1e4");
  CHECK_THROWS_AS(parse_clifford("e1e99", alg), Error);
}

TEST_CASE("algebra mismatch and bad primes") {
  const auto a = QClifford::make(QForm::diagonal({1, 1}).gram());
  const auto b = QClifford::make(QForm::diagonal({1, -1}).gram());
  try {
    (void)(a->generator(0) * b->generator(0));
    FAIL("mixed product accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::algebra_mismatch);
  }
  CHECK_THROWS_AS(PrimeField(4), Error);
  CHECK_THROWS_AS(span_rank({a->scalar(Rational(1, 101))}, 101), Error);
}

TEST_CASE("span_rank matches a dense oracle and ignores order") {
  const auto alg = QClifford::make(QForm::diagonal({2, -3, 1, 5, -1, 7}).gram());
  std::mt19937_64 rng(4);
  std::vector<QElt> xs;
  for (int i = 0; i < 40; ++i) xs.push_back(random_elt(alg, rng, 3));
  for (int i = 0; i < 10; ++i) xs.push_back(xs[i] + xs[i + 1]);
  const std::size_t r = span_rank(xs, 101);
  CHECK(r == oracle::dense_rank_mod_p(dense_rows(xs, 101), 101));
  std::shuffle(xs.begin(), xs.end(), rng);
  CHECK(span_rank(xs, 101) == r);
}

TEST_CASE("word generation") {
  CHECK(WordPolicy::three_fold().word_count(9) == 729);
  CHECK(WordPolicy::restricted_four_fold().word_count(9) == 2916);
  CHECK(WordPolicy::up_to(2).word_count(3) == 12);
  const auto alg = QClifford::make(QForm::diagonal({1, -1, 2}).gram());
  std::vector<QElt> g = {alg->generator(0), alg->generator(1), alg->generator(2)};
  const auto w1 = generate_words(g, WordPolicy::up_to(3), 1);
  const auto w4 = generate_words(g, WordPolicy::up_to(3), 4);
  REQUIRE(w1.size() == 3 + 9 + 27);
  CHECK(w1 == w4);
  CHECK(w1[3] == g[0] * g[0]);
  CHECK(w1[4] == g[0] * g[1]);
}

TEST_CASE("closure rank is monotone and permutation invariant") {
  const auto alg = QClifford::make(QForm::diagonal({1, 2, -1, 3}).gram());
  const auto fp = FpClifford::make(alg->gram(), PrimeField(101));
  const QElt e1 = alg->generator(0), e2 = alg->generator(1), e3 = alg->generator(2), e4 = alg->generator(3);
  std::vector<QElt> gens = {e1 * e2, e2 * e3 + e1 * e4, e3 * e4};
  std::vector<FpElt> g;
  for (const auto& x : gens) g.push_back(reduce_mod_p(x, fp));
  const std::size_t full = closure_basis(g).size();
  std::vector<FpElt> perm = {g[2], g[0], g[1]};
  CHECK(closure_basis(perm).size() == full);
  std::size_t prev = 0;
  for (std::size_t L = 1; L <= 5; ++L) {
    const std::size_t r = span_rank(generate_words(gens, WordPolicy::up_to(L)), 101);
    CHECK(r >= prev);
    CHECK(r <= full);
    prev = r;
  }
  CHECK(prev == full);
}

TEST_CASE("relation conventions") {
  const Matrix<Rational> d{{2, 1}, {1, 4}};
  CHECK(relation_form(d, RelationConvention::polar) == d);
  const auto q = relation_form(d, RelationConvention::quadratic_coefficients);
  CHECK(q(0, 0) == 2);
  CHECK(q(0, 1) == Rational(1, 2));
  CHECK(parse_relation_convention("polar") == RelationConvention::polar);
  CHECK(parse_relation_convention("quadratic-coefficients") == RelationConvention::quadratic_coefficients);
  CHECK_THROWS_AS(parse_relation_convention("bogus"), Error);
}

TEST_CASE("generators of the default field") {
  const auto f = SymCubicField::reference();
  const auto space = build_transcendental(f, f.b_basis());
  const auto alg = QClifford::make(relation_form(space.D.gram(), RelationConvention::quadratic_coefficients));
  const auto gs = build_generators(expand_f1f2(f, alg));
  CHECK(gs.golden_ok);
  CHECK(gs.identities_ok);
  for (int i = 0; i < 3; ++i) CHECK(gs.g[i] == parse_clifford(printed_generators()[i], alg));
  for (const auto& g : gs.g) CHECK(g.has_grade(2));
  // A form that is not block diagonal is rejected.
  Matrix<Rational> m = space.D.gram();
  m(0, 5) = m(5, 0) = 1;
  try {
    expand_f1f2(f, QClifford::make(m));
    FAIL("non block diagonal accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_block_diagonal);
  }
}

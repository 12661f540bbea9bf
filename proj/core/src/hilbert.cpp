#include <array>

#include "k3ks/error.hpp"
#include "k3ks/qform.hpp"

namespace k3ks {

namespace {

// Integer in the same square class as a nonzero rational.
Integer integral_representative(const Rational& a) { return a.get_num() * a.get_den(); }

int legendre(const Integer& a, long p) {
  Integer pp(p);
  return mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
}

// (u - 1)/2 mod 2 and (u^2 - 1)/8 mod 2 for odd u.
int eps2(const Integer& u) {
  unsigned long r = mpz_fdiv_ui(u.get_mpz_t(), 4);
  return r == 3 ? 1 : 0;
}
int omega2(const Integer& u) {
  unsigned long r = mpz_fdiv_ui(u.get_mpz_t(), 8);
  return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

int hilbert_symbol(const Rational& a, const Rational& b, const Place& v) {
  if (a == 0 || b == 0) throw Error(ErrorCode::malformed_input, "Hilbert symbol of zero");
  if (v.is_real()) return (a < 0 && b < 0) ? -1 : 1;
  const long p = v.prime();
  Integer x = integral_representative(a), y = integral_representative(b);
  const Integer pp(p);
  unsigned alpha = valuation(x, pp), beta = valuation(y, pp);
  Integer u = x, w = y;
  for (unsigned i = 0; i < alpha; ++i) u /= pp;
  for (unsigned i = 0; i < beta; ++i) w /= pp;
  if (p == 2) {
    int e = eps2(u) * eps2(w) + static_cast<int>(alpha) * omega2(w) +
            static_cast<int>(beta) * omega2(u);
    return (e % 2) ? -1 : 1;
  }
  int s = 1;
  if ((alpha * beta) % 2 == 1 && (p % 4) == 3) s = -s;
  if (beta % 2 == 1) s *= legendre(u, p);
  if (alpha % 2 == 1) s *= legendre(w, p);
  return s;
}

LocalClass local_class(const Rational& x, long p) {
  if (p == 2 || !is_prime(p)) throw Error(ErrorCode::invalid_prime, "local_class needs an odd prime");
  Integer m = integral_representative(x);
  unsigned v = valuation(m, Integer(p));
  for (unsigned i = 0; i < v; ++i) m /= p;
  return LocalClass{v % 2 == 1, legendre(m, p) == -1};
}

DyadicClass dyadic_class(const Rational& x) {
  Integer m = integral_representative(x);
  unsigned v = valuation(m, Integer(2));
  m >>= v;
  return DyadicClass{v % 2 == 1, static_cast<unsigned>(mpz_fdiv_ui(m.get_mpz_t(), 8))};
}

long least_nonresidue(long p) {
  if (p == 2 || !is_prime(p)) throw Error(ErrorCode::invalid_prime, "least_nonresidue needs an odd prime");
  for (long a = 2;; ++a)
    if (legendre(Integer(a), p) == -1) return a;
}

namespace {

std::vector<Integer> to_integers(const std::vector<long>& v) {
  return {v.begin(), v.end()};
}

Integer product(const std::vector<Integer>& v) {
  Integer out = 1;
  for (const auto& x : v) out *= x;
  return out;
}

QForm as_form(const std::vector<Integer>& v) {
  std::vector<Rational> r(v.begin(), v.end());
  return QForm::diagonal(r);
}

}  // namespace

QForm build_local_form(long p, LocalClass want_disc, int want_hasse, HasseConvention convention) {
  if (p == 2 || !is_prime(p)) throw Error(ErrorCode::invalid_prime, "build_local_form needs an odd prime");
  const long a = least_nonresidue(p);
  const Place place = Place::prime(p);
  auto matches = [&](const std::vector<Integer>& d) {
    return local_class(Rational(product(d)), p) == want_disc &&
           hasse_invariant(d, place, convention) == want_hasse;
  };
  const std::vector<std::vector<long>> standard = {
      {1, -1, 1, -1}, {1, -a, p, -a * p}, {1, -1, 1, p}, {1, -1, a, p}};
  for (const auto& s : standard) {
    auto d = to_integers(s);
    if (matches(d)) return as_form(d);
  }
  const std::array<long, 8> pool = {1, -1, a, -a, p, -p, a * p, -a * p};
  for (long i : pool)
    for (long j : pool)
      for (long k : pool)
        for (long l : pool) {
          auto d = to_integers({i, j, k, l});
          if (matches(d)) return as_form(d);
        }
  throw Error(ErrorCode::local_realization_failed,
              "no 4-dimensional local form at p=" + std::to_string(p));
}

QForm build_dyadic_form(DyadicClass want_disc, int want_hasse, HasseConvention convention) {
  const std::array<long, 16> pool = {1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 14, -14};
  const Place two = Place::prime(2);
  for (long i : pool)
    for (long j : pool)
      for (long k : pool)
        for (long l : pool) {
          auto d = to_integers({i, j, k, l});
          if (dyadic_class(Rational(product(d))) == want_disc &&
              hasse_invariant(d, two, convention) == want_hasse)
            return as_form(d);
        }
  throw Error(ErrorCode::local_realization_failed, "no 4-dimensional dyadic form");
}

}  // namespace k3ks

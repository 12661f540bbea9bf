#pragma once

// Hilbert symbols decided without the closed formulas: by searching for a
// primitive solution of z^2 = a x^2 + b y^2 modulo p^k (Hensel lifting makes
// k = 3 enough for odd p and k = 5 for p = 2 once a, b have valuation 0 or 1),
// and for large odd p by tabulating the squares mod p.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace oracle {

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// a = p^(2k) * p^alpha * u with alpha in {0, 1} and u prime to p.
struct Split {
  int alpha = 0;
  mpz_class unit;
};

inline Split split(mpz_class a, long p) {
  if (a == 0) throw std::invalid_argument("zero");
  Split s;
  while (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p))) {
    a /= p;
    s.alpha ^= 1;
  }
  s.unit = a;
  return s;
}

inline bool is_square_mod_p(const mpz_class& u, long p) {
  const std::int64_t r = mod(mpz_class(u % p).get_si(), p);
  for (std::int64_t x = 0; x < p; ++x)
    if (x * x % p == r) return true;
  return false;
}

// Canonical representative of the square class: p^alpha times a small unit.
inline std::int64_t class_rep(const mpz_class& a, long p) {
  const Split s = split(a, p);
  std::int64_t u;
  if (p == 2) {
    u = mod(mpz_class(s.unit % 8).get_si(), 8);
  } else {
    std::int64_t nonres = 2;
    while (is_square_mod_p(mpz_class(nonres), p)) ++nonres;
    u = is_square_mod_p(s.unit, p) ? 1 : nonres;
  }
  return s.alpha ? u * p : u;
}

// Primitive solution search modulo p^k.
inline int hilbert_by_enumeration(const mpz_class& a, const mpz_class& b, long p) {
  static std::map<std::tuple<std::int64_t, std::int64_t, long>, int> cache;
  const std::int64_t ra = class_rep(a, p), rb = class_rep(b, p);
  const auto key = std::make_tuple(ra, rb, p);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const int k = p == 2 ? 5 : 3;
  std::int64_t m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  std::vector<char> square(m, 0), unit_square(m, 0);
  for (std::int64_t z = 0; z < m; ++z) {
    square[z * z % m] = 1;
    if (z % p) unit_square[z * z % m] = 1;
  }
  const std::int64_t am = mod(ra, m), bm = mod(rb, m);
  int result = -1;
  for (std::int64_t x = 0; x < m && result < 0; ++x)
    for (std::int64_t y = 0; y < m; ++y) {
      const std::int64_t r = (am * (x * x % m) + bm * (y * y % m)) % m;
      const bool unit_xy = x % p || y % p;
      if ((unit_xy && square[r]) || unit_square[r]) {
        result = 1;
        break;
      }
    }
  cache[key] = result;
  return result;
}

// Odd primes of any size.
inline int hilbert_by_squares(const mpz_class& a, const mpz_class& b, long p) {
  if (p == 2) return hilbert_by_enumeration(a, b, p);
  const Split sa = split(a, p), sb = split(b, p);
  if (!sa.alpha && !sb.alpha) return 1;
  // z^2 = p u x^2 + v y^2 has a primitive solution iff v is a square mod p.
  if (sa.alpha && !sb.alpha) return is_square_mod_p(sb.unit, p) ? 1 : -1;
  if (!sa.alpha && sb.alpha) return is_square_mod_p(sa.unit, p) ? 1 : -1;
  // (pu, pv) = (pu, -uv).
  return is_square_mod_p(-sa.unit * sb.unit, p) ? 1 : -1;
}

// p = 0 denotes the real place.
inline int hilbert(const mpz_class& a, const mpz_class& b, long p) {
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  if (p <= 13) return hilbert_by_enumeration(a, b, p);
  return hilbert_by_squares(a, b, p);
}

inline std::set<long> primes_of(const std::vector<mpz_class>& xs) {
  std::set<long> out = {2};
  for (mpz_class x : xs) {
    x = abs(x);
    for (long d = 2; mpz_class(d) * d <= x; ++d)
      while (x % d == 0) {
        out.insert(d);
        x /= d;
      }
    if (x > 1) out.insert(x.get_si());
  }
  return out;
}

// Hasse invariant with the i < j pairing.
inline int hasse_lt(const std::vector<mpz_class>& diag, long p) {
  int h = 1;
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) h *= hilbert(diag[i], diag[j], p);
  return h;
}

// Squarefree part of a nonzero integer, signed.
inline mpz_class squarefree(mpz_class x) {
  mpz_class out = x < 0 ? -1 : 1;
  x = abs(x);
  for (long d = 2; mpz_class(d) * d <= x; ++d) {
    int e = 0;
    while (x % d == 0) {
      x /= d;
      ++e;
    }
    if (e % 2) out *= d;
  }
  return out * x;
}

}  // namespace oracle

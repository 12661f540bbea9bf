#pragma once

// Reference computations used only by tests: monomial products for diagonal
// forms by the sign-count rule, dense ranks over F_p, eigenvalue signatures
// in floating point, and cubic roots by the trigonometric formula.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline mpq_class frac(long n, long d) {
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

// e_M e_N for a diagonal form with squares q[i]:
// sign = (-1)^#{(i in M, j in N) : i > j}, times prod_{i in M & N} q[i].
inline std::pair<std::uint32_t, mpq_class> diagonal_monomial_product(std::uint32_t m, std::uint32_t n,
                                                                    const std::vector<mpq_class>& q) {
  int swaps = 0;
  for (int i = 0; i < 32; ++i)
    if (m >> i & 1)
      for (int j = 0; j < i; ++j)
        if (n >> j & 1) ++swaps;
  mpq_class c = swaps % 2 ? -1 : 1;
  for (int i = 0; i < 32; ++i)
    if ((m & n) >> i & 1) c *= q[static_cast<std::size_t>(i)];
  return {m ^ n, c};
}

inline std::map<std::uint32_t, mpq_class> diagonal_product(const std::map<std::uint32_t, mpq_class>& x,
                                                          const std::map<std::uint32_t, mpq_class>& y,
                                                          const std::vector<mpq_class>& q) {
  std::map<std::uint32_t, mpq_class> out;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y) {
      const auto [m, c] = diagonal_monomial_product(a, b, q);
      out[m] += c * ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  for (; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

// Rank of a dense matrix over F_p by plain row reduction.
inline std::size_t dense_rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::uint64_t inv = pow_mod(rows[rank][c], p - 2, p);
    for (auto& v : rows[rank]) v = v * inv % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const std::uint64_t f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] = (rows[r][k] + (p - f) * rows[rank][k]) % p;
    }
    ++rank;
  }
  return rank;
}

inline std::uint64_t rational_mod_p(const mpq_class& q, std::uint64_t p) {
  const mpz_class pp(static_cast<unsigned long>(p));
  mpz_class n = q.get_num() % pp, d = q.get_den() % pp;
  if (n < 0) n += pp;
  return n.get_ui() * pow_mod(d.get_ui(), p - 2, p) % p;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Number of positive and negative eigenvalues.
inline std::pair<std::size_t, std::size_t> float_signature(const std::vector<std::vector<double>>& a) {
  std::size_t pos = 0, neg = 0;
  for (double e : symmetric_eigenvalues(a)) {
    if (e > 1e-9) ++pos;
    else if (e < -1e-9) ++neg;
  }
  return {pos, neg};
}

// Real roots of x^3 + c2 x^2 + c1 x + c0 with three real roots, descending.
inline std::vector<double> cubic_roots(double c0, double c1, double c2) {
  const double p = c1 - c2 * c2 / 3, q = 2 * c2 * c2 * c2 / 27 - c2 * c1 / 3 + c0;
  const double r = 2 * std::sqrt(-p / 3);
  const double phi = std::acos(std::clamp(3 * q / (p * r), -1.0, 1.0)) / 3;
  std::vector<double> out;
  for (int k = 0; k < 3; ++k) out.push_back(r * std::cos(phi - 2 * M_PI * k / 3) - c2 / 3);
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace oracle

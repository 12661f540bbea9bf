#include "k3ks/interval.hpp"

#include <algorithm>

#include "k3ks/error.hpp"

namespace k3ks {

Interval::Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
  if (lo_ > hi_) throw Error(ErrorCode::internal, "interval with lo > hi");
}

Rational Interval::magnitude() const { return std::max(abs(lo_), abs(hi_)); }

namespace {

Rational floor_dyadic(const Rational& x, unsigned bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(q, Integer(1) << bits);
  r.canonicalize();
  return r;
}

Rational ceil_dyadic(const Rational& x, unsigned bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(q, Integer(1) << bits);
  r.canonicalize();
  return r;
}

}  // namespace

Interval Interval::round_out(unsigned bits) const {
  return Interval(floor_dyadic(lo_, bits), ceil_dyadic(hi_, bits));
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  return Interval(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval operator*(const Rational& s, const Interval& a) {
  if (s >= 0) return Interval(s * a.lo_, s * a.hi_);
  return Interval(s * a.hi_, s * a.lo_);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw Error(ErrorCode::internal, "interval division by zero-containing interval");
  return a * Interval(1 / b.hi_, 1 / b.lo_);
}

Interval square(const Interval& a) {
  Rational l2 = a.lo() * a.lo(), h2 = a.hi() * a.hi();
  if (a.contains_zero()) return Interval(0, std::max(l2, h2));
  return Interval(std::min(l2, h2), std::max(l2, h2));
}

namespace {

// floor(sqrt(x) * 2^bits) / 2^bits, exact.
Rational sqrt_floor(const Rational& x, unsigned bits) {
  // sqrt(n/d) * 2^b = sqrt(n * d * 4^b) / d
  Integer t = x.get_num() * x.get_den();
  t <<= 2 * bits;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
  // s <= sqrt(t) so s / (d 2^b) <= sqrt(x); round down again to a dyadic.
  Rational r(s, x.get_den() << bits);
  r.canonicalize();
  return r;
}

Rational sqrt_ceil(const Rational& x, unsigned bits) {
  Integer t = x.get_num() * x.get_den();
  t <<= 2 * bits;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
  if (s * s != t) s += 1;
  Rational r(s, x.get_den() << bits);
  r.canonicalize();
  return r;
}

}  // namespace

Interval sqrt(const Interval& a, unsigned bits) {
  if (a.lo() < 0) throw Error(ErrorCode::internal, "sqrt of interval with negative part");
  return Interval(sqrt_floor(a.lo(), bits), sqrt_ceil(a.hi(), bits));
}

double to_double(const Rational& value) { return value.get_d(); }

std::string to_decimal(const Rational& value, int digits, int direction) {
  if (value == 0) return "0";
  if (digits < 1) digits = 1;
  const bool negative = value < 0;
  const Rational mag = abs(value);
  // Find e with 10^(e-1) <= mag < 10^e.
  long e = static_cast<long>(mpz_sizeinbase(mag.get_num().get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(mag.get_den().get_mpz_t(), 10));
  auto pow10 = [](long k) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    return k < 0 ? Rational(1, p) : Rational(p);
  };
  while (mag >= pow10(e)) ++e;
  while (mag < pow10(e - 1)) --e;
  Rational scaled = mag * pow10(digits - e);
  // Rounding direction on the magnitude flips for negative values.
  int dir = negative ? -direction : direction;
  Integer n;
  if (dir < 0) {
    mpz_fdiv_q(n.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  } else if (dir > 0) {
    mpz_cdiv_q(n.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  } else {
    Rational half = scaled + Rational(1, 2);
    mpz_fdiv_q(n.get_mpz_t(), half.get_num().get_mpz_t(), half.get_den().get_mpz_t());
  }
  std::string d = n.get_str();
  if (static_cast<int>(d.size()) > digits) {  // carried into a new digit
    ++e;
    d.pop_back();
  }
  std::string out = negative ? "-" : "";
  out += d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  out += "e" + std::to_string(e - 1);
  return out;
}

std::string Interval::to_string(int digits) const {
  return "[" + to_decimal(lo_, digits, -1) + ", " + to_decimal(hi_, digits, +1) + "]";
}

}  // namespace k3ks

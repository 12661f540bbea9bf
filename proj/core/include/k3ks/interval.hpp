#pragma once

#include <string>

#include "k3ks/rational.hpp"

namespace k3ks {

// Closed interval with exact rational endpoints. Arithmetic is exact; use
// round_out() to cap endpoint sizes, which only ever widens the enclosure.
class Interval {
 public:
  Interval() = default;
  explicit Interval(const Rational& point) : lo_(point), hi_(point) {}
  Interval(const Rational& lo, const Rational& hi);

  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0 && hi_ >= 0; }
  bool is_positive() const { return lo_ > 0; }
  bool is_negative() const { return hi_ < 0; }
  bool disjoint_from(const Interval& other) const {
    return hi_ < other.lo_ || other.hi_ < lo_;
  }
  // max(|lo|, |hi|)
  Rational magnitude() const;

  // Outward rounding of both endpoints to multiples of 2^-bits.
  Interval round_out(unsigned bits) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator*(const Rational& s, const Interval& a);
  // Requires b not to contain zero.
  friend Interval operator/(const Interval& a, const Interval& b);

  std::string to_string(int digits = 30) const;

 private:
  Rational lo_{0};
  Rational hi_{0};
};

Interval square(const Interval& a);
// Enclosure of sqrt over a nonnegative interval, endpoints resolved to 2^-bits.
Interval sqrt(const Interval& a, unsigned bits);

// Decimal rendering of a rational to the given number of significant digits
// (rounded toward the requested direction: -1 down, +1 up, 0 nearest).
std::string to_decimal(const Rational& value, int digits, int direction = 0);
double to_double(const Rational& value);

// Complex number enclosed by a rectangle.
struct ComplexInterval {
  Interval re;
  Interval im;

  ComplexInterval() = default;
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}

  ComplexInterval conj() const { return {re, -im}; }
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
  ComplexInterval round_out(unsigned bits) const {
    return {re.round_out(bits), im.round_out(bits)};
  }

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexInterval operator*(const Interval& s, const ComplexInterval& a) {
    return {s * a.re, s * a.im};
  }
};

}  // namespace k3ks

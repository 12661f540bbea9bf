#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace k3ks {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p/q", "p" or a signed decimal literal such as "-0.25".
Rational parse_rational(std::string_view text);
// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

int sign(const Rational& value);
int sign(const Integer& value);

// Prime factorisation of |n| (n != 0), primes ascending.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);
std::vector<Integer> prime_divisors(const Integer& n);

bool is_prime(const Integer& n);
bool is_prime(long n);

// Signed squarefree integer s with value = s * r^2 for some rational r.
Integer squarefree_class(const Rational& value);
// Same, and also returns r.
std::pair<Integer, Rational> squarefree_decomposition(const Rational& value);

// p-adic valuation of a nonzero integer.
unsigned valuation(const Integer& n, const Integer& p);

// Exact square test for rationals; returns the root when it exists.
bool is_square(const Rational& value, Rational* root = nullptr);

}  // namespace k3ks

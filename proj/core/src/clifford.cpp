#include "k3ks/clifford.hpp"

namespace k3ks {

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 2 || p >= (std::uint64_t{1} << 31) || !is_prime(Integer(static_cast<unsigned long>(p))))
    throw Error(ErrorCode::invalid_prime, std::to_string(p) + " is not a prime below 2^31");
}

PrimeField::value_type PrimeField::from_rational(const Rational& q) const {
  const Integer pp(static_cast<unsigned long>(p_));
  if (mpz_divisible_p(q.get_den().get_mpz_t(), pp.get_mpz_t()))
    throw Error(ErrorCode::denominator_divisible_by_p,
                "coefficient " + k3ks::to_string(q) + " has a denominator divisible by " + std::to_string(p_));
  Integer num, den;
  mpz_fdiv_r(num.get_mpz_t(), q.get_num().get_mpz_t(), pp.get_mpz_t());
  mpz_fdiv_r(den.get_mpz_t(), q.get_den().get_mpz_t(), pp.get_mpz_t());
  return mul(num.get_ui(), inv(den.get_ui()));
}

PrimeField::value_type PrimeField::inv(value_type a) const {
  if (a % p_ == 0) throw Error(ErrorCode::not_invertible, "inverse of zero mod p");
  // Fermat.
  value_type result = 1, base = a % p_;
  for (std::uint64_t e = p_ - 2; e > 0; e >>= 1) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
  }
  return result;
}

std::string monomial_label(Mask m) {
  if (m == 0) return "1";
  std::string s;
  for (int i = 0; i < 32; ++i)
    if (m >> i & 1) s += "e" + std::to_string(i + 1);
  return s;
}

CliffordElt<PrimeField> reduce_mod_p(const CliffordElt<RationalRing>& x,
                                     const std::shared_ptr<const CliffordAlgebra<PrimeField>>& target) {
  if (x.algebra()->gram() != target->gram())
    throw Error(ErrorCode::algebra_mismatch, "reduction target has a different form");
  std::map<Mask, std::uint64_t> t;
  for (const auto& [m, c] : x.terms()) t.emplace(m, target->ring().from_rational(c));
  return CliffordElt<PrimeField>(target, std::move(t));
}

template class CliffordAlgebra<RationalRing>;
template class CliffordAlgebra<PrimeField>;
template class CliffordElt<RationalRing>;
template class CliffordElt<PrimeField>;

}  // namespace k3ks

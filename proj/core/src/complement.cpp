#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "k3ks/error.hpp"
#include "k3ks/qform.hpp"

namespace k3ks {

namespace {

constexpr HasseConvention kLt = HasseConvention::lt;
// Extra primes allowed in the global search beyond the relevant ones.
constexpr int kExtraPrimes = 3;
constexpr std::size_t kMaxCandidates = 96;

struct Candidate {
  Integer value;
  std::uint64_t mask;  // prime support, indexed like the prime list
};

std::vector<Candidate> squarefree_products(const std::vector<long>& primes) {
  std::vector<Candidate> out;
  const std::size_t n = primes.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Integer v = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) v *= primes[i];
    out.push_back({v, mask});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  if (out.size() > kMaxCandidates) out.resize(kMaxCandidates);
  return out;
}

std::uint64_t support_mask(const Integer& x, const std::vector<long>& primes) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (mpz_divisible_ui_p(x.get_mpz_t(), primes[i])) mask |= std::uint64_t{1} << i;
  return mask;
}

}  // namespace

ComplementCertificate complement_for_embedding(const QForm& q1, const QForm& q2) {
  if (q2.dim() < q1.dim() + 4)
    throw Error(ErrorCode::codimension_too_small,
                "codimension " + std::to_string(static_cast<long>(q2.dim()) - static_cast<long>(q1.dim())) +
                    " is below 4");
  const FormInvariants i1 = form_invariants(q1, kLt);
  const FormInvariants i2 = form_invariants(q2, kLt);
  if (i1.signature.positive > i2.signature.positive || i1.signature.negative > i2.signature.negative)
    throw Error(ErrorCode::real_obstruction, "signature of q1 does not fit inside q2");

  ComplementCertificate cert;
  const std::size_t cp = i2.signature.positive - i1.signature.positive;
  const std::size_t cn = i2.signature.negative - i1.signature.negative;
  cert.target_signature = {cp, cn};
  cert.target_disc = squarefree_class(Rational(i1.disc * i2.disc));

  std::set<Place> places;
  for (const auto& [v, h] : i1.hasse) places.insert(v);
  for (const auto& [v, h] : i2.hasse) places.insert(v);
  for (const auto& p : prime_divisors(cert.target_disc)) places.insert(Place::prime(p.get_si()));

  auto target_at = [&](const Place& v) {
    return i2.hasse_at(v) * i1.hasse_at(v) * hilbert_symbol(Rational(i1.disc), Rational(cert.target_disc), v);
  };

  // Split: padding of unit squares plus a 4-dimensional block W.
  std::size_t pw = std::min<std::size_t>(cp, 2), nw = 4 - pw;
  if (nw > cn) {
    nw = cn;
    pw = 4 - nw;
  }
  std::vector<Integer> pad;
  for (std::size_t i = 0; i < cp - pw; ++i) pad.emplace_back(1);
  for (std::size_t i = 0; i < cn - nw; ++i) pad.emplace_back(-1);
  Integer pad_disc = 1;
  for (const auto& x : pad) pad_disc *= x;
  const Integer w_disc = squarefree_class(Rational(cert.target_disc * pad_disc));

  std::map<Place, int> w_target;
  for (const auto& v : places)
    w_target[v] = target_at(v) * hasse_invariant(pad, v, kLt) *
                  hilbert_symbol(Rational(pad_disc), Rational(w_disc), v);

  std::vector<long> primes;
  for (const auto& v : places)
    if (!v.is_real()) primes.push_back(v.prime());
  for (long p = 3, added = 0; added < kExtraPrimes; p += 2) {
    if (!is_prime(p) || places.count(Place::prime(p))) continue;
    primes.push_back(p);
    ++added;
  }
  if (primes.size() > 62) throw Error(ErrorCode::global_assembly_failed, "too many relevant primes");
  const std::vector<Candidate> cands = squarefree_products(primes);
  const std::uint64_t disc_mask = support_mask(w_disc, primes);
  const int disc_sign = sign(w_disc);
  std::vector<Place> check(places.begin(), places.end());
  for (long p : primes) check.push_back(Place::prime(p));
  std::sort(check.begin(), check.end());
  check.erase(std::unique(check.begin(), check.end()), check.end());

  std::array<int, 4> slot_sign{};
  for (std::size_t i = 0; i < 4; ++i) slot_sign[i] = i < pw ? 1 : -1;

  // Square classes of S-units as bit vectors: bit 0 is -1, bit i+1 is primes[i].
  // The Hilbert symbol is then an F_2-bilinear form per place.
  const std::size_t gens = primes.size() + 1;
  auto generator = [&](std::size_t g) { return g == 0 ? Rational(-1) : Rational(primes[g - 1]); };
  struct PlaceTable {
    std::vector<std::uint64_t> rows;
    bool want_negative = false;
  };
  std::vector<PlaceTable> tables;
  for (const auto& v : check) {
    PlaceTable t;
    t.rows.assign(gens, 0);
    for (std::size_t g = 0; g < gens; ++g)
      for (std::size_t h = 0; h < gens; ++h)
        if (hilbert_symbol(generator(g), generator(h), v) == -1) t.rows[g] |= std::uint64_t{1} << h;
    auto it = w_target.find(v);
    t.want_negative = it != w_target.end() && it->second == -1;
    tables.push_back(std::move(t));
  }
  auto encode = [](int sgn, std::uint64_t mask) { return (mask << 1) | (sgn < 0 ? 1u : 0u); };
  auto hasse_matches = [&](const std::array<std::uint64_t, 4>& w) {
    for (const auto& t : tables) {
      int parity = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        std::uint64_t r = 0;
        for (std::size_t g = 0; g < gens; ++g)
          if (w[i] >> g & 1) r ^= t.rows[g];
        for (std::size_t j = i + 1; j < 4; ++j) parity ^= std::popcount(r & w[j]) & 1;
      }
      if ((parity == 1) != t.want_negative) return false;
    }
    return true;
  };

  std::optional<std::array<std::uint64_t, 4>> found;
  const std::size_t n = cands.size();
  if (disc_sign * slot_sign[0] * slot_sign[1] * slot_sign[2] == slot_sign[3])
    for (std::size_t m = 0; m < n && !found; ++m)
      for (std::size_t a = 0; a <= m && !found; ++a)
        for (std::size_t b = 0; b <= m && !found; ++b)
          for (std::size_t c = 0; c <= m && !found; ++c) {
            if (std::max({a, b, c}) != m) continue;
            const std::uint64_t last_mask = disc_mask ^ cands[a].mask ^ cands[b].mask ^ cands[c].mask;
            std::array<std::uint64_t, 4> w = {encode(slot_sign[0], cands[a].mask), encode(slot_sign[1], cands[b].mask),
                                              encode(slot_sign[2], cands[c].mask), encode(slot_sign[3], last_mask)};
            if (hasse_matches(w)) found = w;
          }
  if (!found)
    throw Error(ErrorCode::global_assembly_failed, "no rational complement found in the search range");

  std::vector<Rational> entries(pad.begin(), pad.end());
  for (std::uint64_t code : *found) {
    Integer x = (code & 1) ? -1 : 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (code >> (i + 1) & 1) x *= primes[i];
    entries.emplace_back(x);
  }
  cert.complement = QForm::diagonal(entries);

  const QForm sum = direct_sum(q1, cert.complement);
  const FormInvariants ic = form_invariants(cert.complement, kLt);
  const FormInvariants is = form_invariants(sum, kLt);
  std::set<Place> all = places;
  for (const auto& [v, h] : ic.hasse) all.insert(v);
  for (const auto& v : all) {
    PlaceRecord rec;
    rec.place = v;
    rec.target_hasse = target_at(v);
    rec.achieved_hasse = ic.hasse_at(v);
    rec.sum_hasse = is.hasse_at(v);
    rec.q2_hasse = i2.hasse_at(v);
    rec.matched = rec.target_hasse == rec.achieved_hasse && rec.sum_hasse == rec.q2_hasse;
    auto it = w_target.find(v);
    const int wh = it == w_target.end() ? 1 : it->second;
    if (!v.is_real()) {
      rec.local_witness = v.prime() == 2 ? build_dyadic_form(dyadic_class(Rational(w_disc)), wh, kLt)
                                         : build_local_form(v.prime(), local_class(Rational(w_disc), v.prime()), wh, kLt);
    }
    cert.places.push_back(std::move(rec));
  }
  if (!cert.places.empty()) cert.places.back().fixed_by_reciprocity = true;
  cert.verified = equivalent_over_q(sum, q2) &&
                  std::all_of(cert.places.begin(), cert.places.end(), [](const PlaceRecord& r) { return r.matched; });
  return cert;
}

}  // namespace k3ks

#include "k3ks/rank.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

namespace k3ks {

EchelonBasis::EchelonBasis(PrimeField field, std::size_t dim)
    : field_(std::move(field)), dim_(dim), row_of_pivot_(dim, -1) {}

bool EchelonBasis::insert(std::vector<std::uint64_t> v) {
  if (v.size() != dim_) throw Error(ErrorCode::internal, "echelon vector has the wrong length");
  const std::uint64_t p = field_.modulus();
  for (std::size_t c = 0; c < dim_; ++c) {
    if (v[c] == 0) continue;
    const int r = row_of_pivot_[c];
    if (r < 0) {
      const std::uint64_t inv = field_.inv(v[c]);
      for (std::size_t k = c; k < dim_; ++k) v[k] = v[k] * inv % p;
      row_of_pivot_[c] = static_cast<int>(rows_.size());
      rows_.push_back(std::move(v));
      return true;
    }
    const std::uint64_t f = p - v[c];
    const auto& row = rows_[static_cast<std::size_t>(r)];
    for (std::size_t k = c; k < dim_; ++k)
      if (row[k]) v[k] = (v[k] + f * row[k]) % p;
  }
  return false;
}

std::size_t span_rank(const std::vector<FpElt>& elements) {
  if (elements.empty()) return 0;
  const auto& alg = elements.front().algebra();
  EchelonBasis basis(alg->ring(), alg->dim());
  for (const auto& x : elements) basis.insert(x.coords());
  return basis.rank();
}

std::size_t span_rank(const std::vector<QElt>& elements, std::uint64_t p) {
  if (elements.empty()) return 0;
  const auto& alg = elements.front().algebra();
  const PrimeField field(p);
  EchelonBasis basis(field, alg->dim());
  for (const auto& x : elements) {
    std::vector<std::uint64_t> v(alg->dim(), 0);
    for (const auto& [m, c] : x.terms()) v[m] = field.from_rational(c);
    basis.insert(std::move(v));
  }
  return basis.rank();
}

WordPolicy WordPolicy::restricted_four_fold() {
  return {Kind::max_length, 4, 4, {0, 1, 2, 3}, "restricted-4fold"};
}

WordPolicy WordPolicy::three_fold() { return {Kind::max_length, 3, 3, {}, "3fold"}; }

WordPolicy WordPolicy::up_to(std::size_t L, std::vector<std::size_t> last) {
  if (L < 1) throw Error(ErrorCode::malformed_input, "word length must be at least 1");
  std::string name = "upto" + std::to_string(L);
  if (!last.empty()) name += "-restricted";
  return {Kind::max_length, 1, L, std::move(last), name};
}

WordPolicy WordPolicy::closure() { return {Kind::closure, 1, 0, {}, "closure"}; }

std::size_t WordPolicy::word_count(std::size_t g) const {
  if (kind == Kind::closure) return 0;
  const std::size_t last = last_factors.empty() ? g : last_factors.size();
  std::size_t total = 0;
  for (std::size_t len = min_length; len <= max_length; ++len) {
    std::size_t w = last;
    for (std::size_t i = 1; i < len; ++i) w *= g;
    total += w;
  }
  return total;
}

namespace {

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<QElt> generate_words(const std::vector<QElt>& gens, const WordPolicy& policy, unsigned threads) {
  if (gens.empty()) throw Error(ErrorCode::malformed_input, "no generators");
  if (policy.kind != WordPolicy::Kind::max_length)
    throw Error(ErrorCode::malformed_input, "closure is computed by closure_basis");
  if (policy.min_length < 1 || policy.max_length < policy.min_length)
    throw Error(ErrorCode::malformed_input, "bad word length range");
  std::vector<std::size_t> last = policy.last_factors;
  if (last.empty()) {
    last.resize(gens.size());
    std::iota(last.begin(), last.end(), 0);
  }
  for (std::size_t i : last)
    if (i >= gens.size()) throw Error(ErrorCode::malformed_input, "last-factor index out of range");

  std::vector<QElt> out;
  // prefixes[k] = all unrestricted products of length k, lexicographic.
  std::vector<QElt> prefixes = {gens.front().algebra()->scalar(Rational(1))};
  for (std::size_t len = 1; len <= policy.max_length; ++len) {
    if (len >= policy.min_length) {
      const std::size_t base = out.size();
      out.resize(base + prefixes.size() * last.size());
      parallel_for(prefixes.size() * last.size(), threads, [&](std::size_t i) {
        out[base + i] = prefixes[i / last.size()] * gens[last[i % last.size()]];
      });
    }
    if (len == policy.max_length) break;
    std::vector<QElt> next(prefixes.size() * gens.size());
    parallel_for(next.size(), threads,
                 [&](std::size_t i) { next[i] = prefixes[i / gens.size()] * gens[i % gens.size()]; });
    prefixes = std::move(next);
  }
  return out;
}

std::vector<FpElt> closure_basis(const std::vector<FpElt>& gens) {
  if (gens.empty()) throw Error(ErrorCode::malformed_input, "no generators");
  const auto& alg = gens.front().algebra();
  const PrimeField& f = alg->ring();
  const std::size_t dim = alg->dim();
  const std::uint64_t p = f.modulus();
  // Right multiplication by each generator as sparse images of monomials.
  std::vector<std::vector<std::vector<std::pair<Mask, std::uint64_t>>>> right(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    right[g].resize(dim);
    for (Mask m = 0; m < dim; ++m) {
      const FpElt img = alg->monomial(m, 1) * gens[g];
      right[g][m].assign(img.terms().begin(), img.terms().end());
    }
  }
  EchelonBasis basis(f, dim);
  std::vector<std::vector<std::uint64_t>> found;
  for (const auto& g : gens) {
    auto v = g.coords();
    if (basis.insert(v)) found.push_back(std::move(v));
  }
  for (std::size_t next = 0; next < found.size(); ++next) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::vector<std::uint64_t> w(dim, 0);
      for (Mask m = 0; m < dim; ++m) {
        const std::uint64_t c = found[next][m];
        if (c == 0) continue;
        for (const auto& [k, d] : right[g][m]) w[k] = (w[k] + c * d) % p;
      }
      if (basis.insert(w)) found.push_back(std::move(w));
    }
  }
  std::vector<FpElt> out;
  out.reserve(found.size());
  for (const auto& v : found) {
    std::map<Mask, std::uint64_t> t;
    for (Mask m = 0; m < dim; ++m)
      if (v[m]) t.emplace(m, v[m]);
    out.emplace_back(alg, std::move(t));
  }
  return out;
}

RankReport rank_report(const std::vector<QElt>& gens, const WordPolicy& policy, std::uint64_t p, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  RankReport r;
  for (const auto& g : gens) r.generators.push_back(g.to_string());
  r.policy = policy.name;
  r.modulus = p;
  if (policy.kind == WordPolicy::Kind::closure) {
    const auto alg = FpClifford::make(gens.front().algebra()->gram(), PrimeField(p));
    std::vector<FpElt> reduced;
    for (const auto& g : gens) reduced.push_back(reduce_mod_p(g, alg));
    r.rank = closure_basis(reduced).size();
    r.closure_rank = r.rank;
  } else {
    const auto words = generate_words(gens, policy, threads);
    r.words = words.size();
    std::set<std::map<Mask, Rational>> distinct;
    for (const auto& w : words) distinct.insert(w.terms());
    r.distinct_words = distinct.size();
    r.rank = span_rank(words, p);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace k3ks

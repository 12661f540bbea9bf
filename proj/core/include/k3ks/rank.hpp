#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "k3ks/clifford.hpp"

namespace k3ks {

/// Incremental row echelon basis over F_p on dense vectors.
class EchelonBasis {
 public:
  EchelonBasis(PrimeField field, std::size_t dim);

  // Reduces v against the basis; keeps it and returns true when independent.
  bool insert(std::vector<std::uint64_t> v);
  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }

 private:
  PrimeField field_;
  std::size_t dim_;
  std::vector<std::vector<std::uint64_t>> rows_;  // pivot entry normalised to 1
  std::vector<int> row_of_pivot_;                 // column -> row index or -1
};

/// Rank over F_p of the span of the coefficient vectors. Independent of
/// element order. Throws denominator_divisible_by_p.
std::size_t span_rank(const std::vector<QElt>& elements, std::uint64_t p);
std::size_t span_rank(const std::vector<FpElt>& elements);

struct WordPolicy {
  enum class Kind { max_length, closure };
  Kind kind = Kind::max_length;
  std::size_t min_length = 1;
  std::size_t max_length = 1;
  std::vector<std::size_t> last_factors;  // empty: unrestricted
  std::string name;

  // Products of exactly four generators whose last factor is among the first four.
  static WordPolicy restricted_four_fold();
  // Products of exactly three generators.
  static WordPolicy three_fold();
  // Products of 1..L generators, optionally restricting the last factor.
  static WordPolicy up_to(std::size_t L, std::vector<std::size_t> last = {});
  static WordPolicy closure();

  std::size_t word_count(std::size_t generators) const;
};

/// Ordered products g_{i1} ... g_{ik}, lexicographic in (k, i1, ..., ik).
/// The output order does not depend on `threads` (0 = hardware concurrency).
std::vector<QElt> generate_words(const std::vector<QElt>& generators, const WordPolicy& policy,
                                 unsigned threads = 0);

/// Smallest subspace containing the generators and closed under right
/// multiplication by them, computed over F_p. Returns its basis elements.
std::vector<FpElt> closure_basis(const std::vector<FpElt>& generators);

struct RankReport {
  std::vector<std::string> generators;
  std::string policy;
  std::uint64_t modulus = 101;
  std::size_t words = 0;
  std::size_t distinct_words = 0;
  std::size_t rank = 0;
  std::optional<std::size_t> closure_rank;
  double seconds = 0;
  // Ranks mod p bound the rational rank from below.
  std::string method = "mod-p";
};

RankReport rank_report(const std::vector<QElt>& generators, const WordPolicy& policy, std::uint64_t p,
                       unsigned threads = 0);

}  // namespace k3ks

#include "k3ks/qform.hpp"

#include <algorithm>
#include <set>

#include "k3ks/error.hpp"

namespace k3ks {

QForm::QForm(Matrix<Rational> gram) : gram_(std::move(gram)) {
  if (!gram_.is_square()) throw Error(ErrorCode::malformed_input, "Gram matrix is not square");
  if (!gram_.is_symmetric()) throw Error(ErrorCode::asymmetric_matrix, "Gram matrix is not symmetric");
}

QForm QForm::diagonal(const std::vector<Rational>& entries) {
  Matrix<Rational> g(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = entries[i];
  return QForm(std::move(g));
}

QForm QForm::diagonal(std::initializer_list<long> entries) {
  std::vector<Rational> v;
  for (long e : entries) v.emplace_back(e);
  return diagonal(v);
}

Rational QForm::determinant() const {
  if (dim() == 0) return Rational(1);
  return k3ks::determinant(gram_);
}

QForm QForm::change_basis(const Matrix<Rational>& b) const {
  return QForm(b.transpose() * gram_ * b);
}

Place Place::prime(long p) {
  if (!is_prime(p)) throw Error(ErrorCode::invalid_prime, std::to_string(p) + " is not prime");
  return Place(p);
}

std::string Place::to_string() const { return is_real() ? "real" : std::to_string(p_); }

Place Place::parse(const std::string& text) {
  if (text == "real") return real();
  try {
    std::size_t used = 0;
    long p = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return prime(p);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::malformed_input, "bad place '" + text + "'");
  }
}

std::string to_string(HasseConvention c) {
  return c == HasseConvention::leq ? "i<=j" : "i<j";
}

std::vector<Place> FormInvariants::places() const {
  std::vector<Place> out;
  for (const auto& [v, h] : hasse) out.push_back(v);
  return out;
}

int FormInvariants::hasse_at(const Place& v) const { return hasse_at(v, convention); }

int FormInvariants::hasse_at(const Place& v, HasseConvention c) const {
  const auto& table = (c == convention) ? hasse : hasse_alt;
  auto it = table.find(v);
  if (it != table.end()) return it->second;
  // Every entry is a unit at an odd prime outside the relevant set.
  return 1;
}

Diagonalization diagonalize(const QForm& q) {
  const std::size_t n = q.dim();
  Matrix<Rational> g = q.gram();
  Matrix<Rational> basis = Matrix<Rational>::identity(n);

  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(g(a, c), g(b, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(g(r, a), g(r, b));
    for (std::size_t r = 0; r < n; ++r) std::swap(basis(r, a), basis(r, b));
  };
  // basis_i += s * basis_j
  auto add_to = [&](std::size_t i, std::size_t j, const Rational& s) {
    for (std::size_t c = 0; c < n; ++c) g(i, c) += s * g(j, c);
    for (std::size_t r = 0; r < n; ++r) g(r, i) += s * g(r, j);
    for (std::size_t r = 0; r < n; ++r) basis(r, i) += s * basis(r, j);
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && g(pivot, pivot) == 0) ++pivot;
    if (pivot == n) {
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i)
        for (std::size_t j = i + 1; j < n && !found; ++j)
          if (g(i, j) != 0) {
            // Diagonal of the block is zero, so (b_i + b_j)^2 = 2 g_ij != 0.
            add_to(i, j, Rational(1));
            pivot = i;
            found = true;
          }
      if (!found) throw DegenerateFormError(n - k);
    }
    swap_index(k, pivot);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (g(r, k) == 0) continue;
      add_to(r, k, -g(r, k) / g(k, k));
    }
  }

  Diagonalization out;
  out.entries.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto [core, root] = squarefree_decomposition(g(k, k));
    out.entries.push_back(core);
    for (std::size_t r = 0; r < n; ++r) basis(r, k) /= root;
  }
  out.basis = std::move(basis);
  return out;
}

std::vector<Place> relevant_places(const std::vector<Integer>& diagonal) {
  std::set<long> primes = {2};
  for (const auto& d : diagonal)
    for (const auto& p : prime_divisors(d)) {
      if (!p.fits_slong_p()) throw Error(ErrorCode::internal, "prime too large for a place");
      primes.insert(p.get_si());
    }
  std::vector<Place> out = {Place::real()};
  for (long p : primes) out.push_back(Place::prime(p));
  return out;
}

int hasse_invariant(const std::vector<Integer>& d, const Place& v, HasseConvention convention) {
  int h = 1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (convention == HasseConvention::leq) h *= hilbert_symbol(Rational(d[i]), Rational(d[i]), v);
    for (std::size_t j = i + 1; j < d.size(); ++j)
      h *= hilbert_symbol(Rational(d[i]), Rational(d[j]), v);
  }
  return h;
}

FormInvariants form_invariants(const QForm& q, HasseConvention convention) {
  Diagonalization diag = diagonalize(q);
  FormInvariants inv;
  inv.dim = q.dim();
  inv.convention = convention;
  Integer prod = 1;
  for (const auto& d : diag.entries) {
    (d > 0 ? inv.signature.positive : inv.signature.negative) += 1;
    prod *= d;
  }
  inv.disc = squarefree_class(Rational(prod));
  const HasseConvention other =
      convention == HasseConvention::leq ? HasseConvention::lt : HasseConvention::leq;
  for (const auto& v : relevant_places(diag.entries)) {
    inv.hasse[v] = hasse_invariant(diag.entries, v, convention);
    inv.hasse_alt[v] = hasse_invariant(diag.entries, v, other);
  }
  inv.diagonal = std::move(diag.entries);
  return inv;
}

QForm direct_sum(const QForm& a, const QForm& b) {
  return QForm(block_diagonal<Rational>({a.gram(), b.gram()}));
}

bool equivalent_over_q(const QForm& a, const QForm& b) {
  const FormInvariants ia = form_invariants(a, HasseConvention::lt);
  const FormInvariants ib = form_invariants(b, HasseConvention::lt);
  if (ia.dim != ib.dim || ia.signature != ib.signature || ia.disc != ib.disc) return false;
  std::set<Place> places;
  for (const auto& [v, h] : ia.hasse) places.insert(v);
  for (const auto& [v, h] : ib.hasse) places.insert(v);
  return std::all_of(places.begin(), places.end(),
                     [&](const Place& v) { return ia.hasse_at(v) == ib.hasse_at(v); });
}

}  // namespace k3ks

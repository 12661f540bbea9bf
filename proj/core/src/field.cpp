#include "k3ks/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "k3ks/error.hpp"

namespace k3ks {

namespace detail {

struct FieldData {
  Matrix<Integer> a;
  Matrix<Rational> a_rat;
  Matrix<Rational> a_sq;
  std::array<Integer, 4> charpoly;
  Integer disc;
  std::array<std::array<Rational, 3>, 3> b_coords;

  mutable std::mutex mu;
  mutable std::map<unsigned, std::vector<Interval>> root_cache;
};

}  // namespace detail

namespace {

using Poly = std::vector<Rational>;  // low degree first

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational eval(const Poly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly remainder(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain = {p};
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(Rational(static_cast<long>(i)) * p[i]);
  trim(d);
  chain.push_back(d);
  while (true) {
    Poly r = remainder(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(r);
  }
  return chain;
}

int variations(const std::vector<Poly>& chain, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    const int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

Poly as_poly(const std::array<Integer, 4>& c) {
  return {Rational(c[0]), Rational(c[1]), Rational(c[2]), Rational(c[3])};
}

// Refines an isolating interval (root strictly inside, simple) by bisection.
Interval bisect_to(const Poly& p, Interval iv, unsigned bits) {
  const Rational target(Integer(1), Integer(1) << bits);
  Rational lo = iv.lo(), hi = iv.hi();
  const int slo = sgn(eval(p, lo));
  while (hi - lo >= target) {
    const Rational mid = (lo + hi) / 2;
    const int s = sgn(eval(p, mid));
    if (s == 0) return Interval(mid);
    if (s == slo) lo = mid;
    else hi = mid;
  }
  return Interval(lo, hi);
}

std::vector<Interval> isolate_roots(const std::array<Integer, 4>& c) {
  const Poly p = as_poly(c);
  const auto chain = sturm_chain(p);
  Integer bound = 1;
  for (int i = 0; i < 3; ++i) bound = std::max(bound, Integer(abs(c[i])));
  Integer m = 1;
  while (m <= bound + 1) m <<= 1;
  std::vector<Interval> found;
  std::vector<std::pair<Rational, Rational>> stack = {{Rational(-m), Rational(m)}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const int n = variations(chain, a) - variations(chain, b);
    if (n == 0) continue;
    // Irreducible, so no root is a dyadic rational endpoint.
    if (n == 1) {
      found.emplace_back(a, b);
      continue;
    }
    const Rational mid = (a + b) / 2;
    stack.push_back({a, mid});
    stack.push_back({mid, b});
  }
  std::sort(found.begin(), found.end(),
            [](const Interval& x, const Interval& y) { return x.lo() > y.lo(); });
  return found;
}

std::array<Rational, 3> mul_coords(const std::array<Rational, 3>& x, const std::array<Rational, 3>& y,
                                   const std::array<Integer, 4>& cp) {
  std::array<Rational, 5> p;
  for (auto& v : p) v = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i + j] += x[i] * y[j];
  for (int d = 4; d >= 3; --d) {
    const Rational t = p[d];
    if (t == 0) continue;
    p[d] = 0;
    p[d - 1] -= t * cp[2];
    p[d - 2] -= t * cp[1];
    p[d - 3] -= t * cp[0];
  }
  return {p[0], p[1], p[2]};
}

// Matrix of multiplication by x on power-basis coordinates (columns = images).
Matrix<Rational> mult_matrix(const std::array<Rational, 3>& x, const std::array<Integer, 4>& cp) {
  Matrix<Rational> m(3, 3);
  for (int j = 0; j < 3; ++j) {
    std::array<Rational, 3> e = {Rational(0), Rational(0), Rational(0)};
    e[j] = 1;
    auto col = mul_coords(x, e, cp);
    for (int i = 0; i < 3; ++i) m(i, j) = col[i];
  }
  return m;
}

// Any solution of m x = rhs (free variables set to zero), or nullopt.
std::optional<std::vector<Rational>> solve_any(Matrix<Rational> m, std::vector<Rational> rhs,
                                               std::size_t* nullity) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c) == 0) ++p;
    if (p == rows) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(m(p, k), m(r, k));
    std::swap(rhs[p], rhs[r]);
    const Rational inv = 1 / m(r, c);
    for (std::size_t k = 0; k < cols; ++k) m(r, k) *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t k = 0; k < cols; ++k) m(i, k) -= f * m(r, k);
      rhs[i] -= f * rhs[r];
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  if (nullity) *nullity = cols - r;
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = rhs[i];
  return x;
}

std::array<std::array<Rational, 3>, 3> derive_b_basis(const Matrix<Integer>& a,
                                                       const std::array<Integer, 4>& cp) {
  // Unknowns: power-basis coordinates of b1 (0..2) and b2 (3..5); b3 = 1.
  // Equations: alpha * b_j - A_1j b1 - A_2j b2 - A_3j b3 = 0, j = 1..3.
  const std::array<Rational, 3> alpha = {Rational(0), Rational(1), Rational(0)};
  const Matrix<Rational> ma = mult_matrix(alpha, cp);
  Matrix<Rational> m(9, 6);
  std::vector<Rational> rhs(9, Rational(0));
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const int row = 3 * j + i;
      // alpha * b_j
      if (j < 2) {
        for (int k = 0; k < 3; ++k) m(row, 3 * j + k) += ma(i, k);
      } else {
        rhs[row] -= ma(i, 0);
      }
      // - A_1j b1 - A_2j b2
      m(row, i) -= Rational(a(0, j));
      m(row, 3 + i) -= Rational(a(1, j));
      // - A_3j * 1
      if (i == 0) rhs[row] += Rational(a(2, j));
    }
  }
  std::size_t nullity = 0;
  auto sol = solve_any(m, rhs, &nullity);
  if (!sol || nullity != 0)
    throw Error(ErrorCode::no_b_basis, "no unique basis with b3 = 1 reproducing A");
  std::array<std::array<Rational, 3>, 3> b;
  for (int k = 0; k < 3; ++k) {
    b[0][k] = (*sol)[k];
    b[1][k] = (*sol)[3 + k];
    b[2][k] = k == 0 ? 1 : 0;
  }
  Matrix<Rational> check(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) check(k, i) = b[i][k];
  if (determinant(check) == 0) throw Error(ErrorCode::no_b_basis, "derived b-basis is dependent");
  return b;
}

std::string term(const Rational& c, const char* mono, bool first) {
  std::ostringstream os;
  const Rational mag = abs(c);
  if (first) {
    if (c < 0) os << "-";
  } else {
    os << (c < 0 ? " - " : " + ");
  }
  if (*mono == '\0') {
    os << k3ks::to_string(mag);
  } else {
    if (mag != 1) os << k3ks::to_string(mag) << "*";
    os << mono;
  }
  return os.str();
}

}  // namespace

SymCubicField SymCubicField::make(const Matrix<Integer>& a) {
  if (a.rows() != 3 || a.cols() != 3) throw Error(ErrorCode::malformed_input, "field matrix must be 3x3");
  if (!a.is_symmetric()) throw Error(ErrorCode::asymmetric_matrix, "field matrix is not symmetric");
  auto d = std::make_shared<detail::FieldData>();
  d->a = a;
  d->a_rat = Matrix<Rational>(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d->a_rat(i, j) = Rational(a(i, j));
  d->a_sq = d->a_rat * d->a_rat;

  const Integer tr = a(0, 0) + a(1, 1) + a(2, 2);
  const Integer minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                         a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  const Integer det = determinant(d->a_rat).get_num();
  d->charpoly = {Integer(-det), minors, Integer(-tr), Integer(1)};
  const Integer& c0 = d->charpoly[0];
  const Integer& c1 = d->charpoly[1];
  const Integer& c2 = d->charpoly[2];
  d->disc = c2 * c2 * c1 * c1 - 4 * c1 * c1 * c1 - 4 * c2 * c2 * c2 * c0 - 27 * c0 * c0 + 18 * c2 * c1 * c0;

  // Rational root test: a monic integer cubic has a rational root iff it has
  // an integer root dividing c0.
  auto value_at = [&](const Integer& x) -> Integer { return ((x + c2) * x + c1) * x + c0; };
  bool reducible = c0 == 0;
  if (!reducible) {
    std::vector<Integer> divisors = {Integer(1)};
    for (const auto& [p, e] : factorize(c0)) {
      const std::size_t n = divisors.size();
      Integer pk = 1;
      for (unsigned k = 1; k <= e; ++k) {
        pk *= p;
        for (std::size_t i = 0; i < n; ++i) divisors.push_back(divisors[i] * pk);
      }
    }
    for (const auto& q : divisors)
      if (value_at(q) == 0 || value_at(Integer(-q)) == 0) reducible = true;
  }
  if (reducible) throw Error(ErrorCode::reducible_charpoly, "characteristic polynomial has a rational root");
  if (d->disc <= 0) throw Error(ErrorCode::not_totally_real, "characteristic polynomial has complex roots");

  d->root_cache[0] = isolate_roots(d->charpoly);
  if (d->root_cache[0].size() != 3) throw Error(ErrorCode::internal, "root isolation did not find three roots");
  d->b_coords = derive_b_basis(a, d->charpoly);
  return SymCubicField(std::move(d));
}

SymCubicField SymCubicField::make(std::initializer_list<std::initializer_list<long>> rows) {
  Matrix<Integer> m(3, 3);
  if (rows.size() != 3) throw Error(ErrorCode::malformed_input, "field matrix must be 3x3");
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != 3) throw Error(ErrorCode::malformed_input, "field matrix must be 3x3");
    std::size_t c = 0;
    for (long v : row) m(r, c++) = v;
    ++r;
  }
  return make(m);
}

SymCubicField SymCubicField::reference() { return make({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}}); }

const Matrix<Integer>& SymCubicField::matrix() const { return data_->a; }
const std::array<Integer, 4>& SymCubicField::charpoly() const { return data_->charpoly; }
Integer SymCubicField::discriminant() const { return data_->disc; }

std::string SymCubicField::charpoly_string() const {
  const auto& c = data_->charpoly;
  std::string s = "x^3";
  const char* monos[] = {"", "x", "x^2"};
  for (int i = 2; i >= 0; --i)
    if (c[i] != 0) s += term(Rational(c[i]), monos[i], false);
  return s;
}

std::vector<Interval> SymCubicField::roots(unsigned bits) const {
  std::lock_guard<std::mutex> lock(data_->mu);
  auto& cache = data_->root_cache;
  auto it = cache.lower_bound(bits);
  if (it != cache.end()) return it->second;
  const auto& base = std::prev(it)->second;
  const Poly p = as_poly(data_->charpoly);
  std::vector<Interval> out;
  for (const auto& iv : base) out.push_back(bisect_to(p, iv, bits));
  cache[bits] = out;
  return out;
}

FieldElt SymCubicField::zero() const { return element(0, 0, 0); }
FieldElt SymCubicField::one() const { return element(1, 0, 0); }
FieldElt SymCubicField::alpha() const { return element(0, 1, 0); }
FieldElt SymCubicField::scalar(const Rational& c) const { return element(c, 0, 0); }

FieldElt SymCubicField::element(const Rational& c0, const Rational& c1, const Rational& c2) const {
  return FieldElt(data_, {c0, c1, c2});
}

std::array<FieldElt, 3> SymCubicField::b_basis() const {
  const auto& b = data_->b_coords;
  return {FieldElt(data_, b[0]), FieldElt(data_, b[1]), FieldElt(data_, b[2])};
}

bool operator==(const SymCubicField& a, const SymCubicField& b) {
  return a.data_ == b.data_ || a.data_->a == b.data_->a;
}

SymCubicField FieldElt::field() const {
  if (!data_) throw Error(ErrorCode::internal, "element without a field");
  return SymCubicField(data_);
}

void FieldElt::require_same_field(const FieldElt& other) const {
  if (!data_ || !other.data_) throw Error(ErrorCode::internal, "element without a field");
  if (data_ != other.data_ && !(data_->a == other.data_->a))
    throw Error(ErrorCode::field_mismatch, "elements belong to different fields");
}

FieldElt operator+(const FieldElt& a, const FieldElt& b) {
  a.require_same_field(b);
  return FieldElt(a.data_, {a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2]});
}

FieldElt operator-(const FieldElt& a, const FieldElt& b) {
  a.require_same_field(b);
  return FieldElt(a.data_, {a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2]});
}

FieldElt operator-(const FieldElt& a) { return FieldElt(a.data_, {-a.c_[0], -a.c_[1], -a.c_[2]}); }

FieldElt operator*(const FieldElt& a, const FieldElt& b) {
  a.require_same_field(b);
  return FieldElt(a.data_, mul_coords(a.c_, b.c_, a.data_->charpoly));
}

FieldElt operator*(const Rational& s, const FieldElt& a) {
  return FieldElt(a.data_, {s * a.c_[0], s * a.c_[1], s * a.c_[2]});
}

FieldElt operator/(const FieldElt& a, const FieldElt& b) { return a * b.inverse(); }

bool operator==(const FieldElt& a, const FieldElt& b) {
  if (a.data_ != b.data_ && a.data_ && b.data_ && !(a.data_->a == b.data_->a)) return false;
  return a.c_ == b.c_;
}

FieldElt FieldElt::inverse() const {
  if (is_zero()) throw Error(ErrorCode::inverse_of_zero, "inverse of zero field element");
  Matrix<Rational> inv;
  if (!invert(mult_matrix(c_, data_->charpoly), inv))
    throw Error(ErrorCode::internal, "multiplication matrix of a nonzero element is singular");
  return FieldElt(data_, {inv(0, 0), inv(1, 0), inv(2, 0)});
}

Matrix<Rational> FieldElt::regular_rep() const {
  return c_[0] * Matrix<Rational>::identity(3) + c_[1] * data_->a_rat + c_[2] * data_->a_sq;
}

Interval eval_interval(const std::array<Rational, 3>& c, const Interval& x) {
  return Interval(c[0]) + x * (Interval(c[1]) + x * Interval(c[2]));
}

Interval FieldElt::conjugate(std::size_t embedding, unsigned bits) const {
  if (embedding >= 3) throw Error(ErrorCode::malformed_input, "embedding index out of range");
  const Rational target(Integer(1), Integer(1) << bits);
  for (unsigned rb = bits + 8;; rb += 32) {
    Interval v = eval_interval(c_, field().roots(rb)[embedding]);
    if (v.width() < target || is_rational()) return v;
  }
}

std::vector<Interval> FieldElt::conjugates(unsigned bits) const {
  return {conjugate(0, bits), conjugate(1, bits), conjugate(2, bits)};
}

SignPattern FieldElt::sign_pattern() const {
  SignPattern out;
  if (is_zero()) {
    out.signs = {0, 0, 0};
    return out;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    for (unsigned bits = 16;; bits *= 2) {
      const Interval v = conjugate(k, bits);
      if (v.contains_zero()) continue;
      out.signs.push_back(v.is_positive() ? 1 : -1);
      (v.is_positive() ? out.positives : out.negatives) += 1;
      break;
    }
  }
  return out;
}

std::string FieldElt::to_string() const {
  std::string s;
  const char* monos[] = {"", "A", "A^2"};
  for (int i = 2; i >= 0; --i) {
    if (c_[i] == 0) continue;
    s += term(c_[i], monos[i], s.empty());
  }
  return s.empty() ? "0" : s;
}

namespace {

// 1 certified true, 0 certified false, -1 undecided at this precision.
int abs_at_most(const Interval& v, const Rational& bound) {
  if (v.magnitude() <= bound) return 1;
  if (v.lo() > bound || v.hi() < -bound) return 0;
  return -1;
}

int check_sign_conditions(const std::array<FieldElt, 3>& f, const Rational& eps, unsigned bits, std::size_t* emb) {
  const SignPattern p1 = f[0].sign_pattern(), p2 = f[1].sign_pattern(), p3 = f[2].sign_pattern();
  if (p1.positives != 1 || p1.negatives != 2 || p2.positives != 1 || p2.negatives != 2) return 0;
  if (p3.negatives != 3) return 0;
  if (f[0] == f[1]) return 0;
  const std::size_t k = std::find(p1.signs.begin(), p1.signs.end(), 1) - p1.signs.begin();
  if (p2.signs[k] != 1) return 0;
  int verdict = 1;
  auto fold = [&](int r) {
    if (r == 0) verdict = 0;
    else if (r < 0 && verdict == 1) verdict = -1;
  };
  for (int i = 0; i < 2; ++i) {
    const Interval top = f[i].conjugate(k, bits);
    fold(top.lo() > 1 ? 1 : (top.hi() <= 1 ? 0 : -1));
    for (std::size_t j = 0; j < 3; ++j)
      if (j != k) fold(abs_at_most(f[i].conjugate(j, bits), eps));
  }
  fold(abs_at_most((f[0] - f[1]).conjugate(k, bits), eps));
  if (verdict == 1 && emb) *emb = k;
  return verdict;
}

}  // namespace

bool satisfies_sign_conditions(const std::array<FieldElt, 3>& f, const Rational& epsilon, std::size_t* embedding) {
  for (unsigned bits : {64u, 256u, 1024u}) {
    const int r = check_sign_conditions(f, epsilon, bits, embedding);
    if (r >= 0) return r == 1;
  }
  return false;
}

SignPatternTriple search_prop33(const SymCubicField& field, const SearchOptions& options) {
  if (options.epsilon <= 0) throw Error(ErrorCode::malformed_input, "epsilon must be positive");
  std::array<double, 3> r;
  {
    const auto roots = field.roots(64);
    for (int k = 0; k < 3; ++k) r[k] = to_double(roots[k].midpoint());
  }
  const double eps = to_double(options.epsilon);
  auto conj = [&](long n0, long n1, long n2, int k) {
    return static_cast<double>(n0) + static_cast<double>(n1) * r[k] + static_cast<double>(n2) * r[k] * r[k];
  };
  constexpr double kSlack = 1e-9;

  struct Candidate {
    FieldElt elt;
    double top;
  };
  std::array<std::vector<Candidate>, 3> cands;
  std::optional<FieldElt> negative;

  for (long h = 1; h <= options.height; ++h) {
    for (long n0 = -h; n0 <= h; ++n0)
      for (long n1 = -h; n1 <= h; ++n1)
        for (long n2 = -h; n2 <= h; ++n2) {
          if (std::max({std::labs(n0), std::labs(n1), std::labs(n2)}) != h) continue;
          const std::array<double, 3> s = {conj(n0, n1, n2, 0), conj(n0, n1, n2, 1), conj(n0, n1, n2, 2)};
          if (!negative && s[0] < -kSlack && s[1] < -kSlack && s[2] < -kSlack) {
            FieldElt x = field.element(n0, n1, n2);
            if (x.sign_pattern().negatives == 3) negative = x;
          }
          for (int k = 0; k < 3; ++k) {
            if (s[k] <= 1) continue;
            bool others_negative = true;
            double worst = 0;
            for (int j = 0; j < 3; ++j)
              if (j != k) {
                others_negative = others_negative && s[j] < -kSlack;
                worst = std::max(worst, std::fabs(s[j]));
              }
            if (!others_negative) continue;
            const double den = std::max(1.0, std::ceil(worst / eps * (1 + kSlack)));
            if (den > options.max_den || s[k] / den <= 1 + kSlack) continue;
            FieldElt x = Rational(Integer(1), Integer(static_cast<long>(den))) * field.element(n0, n1, n2);
            const double top = s[k] / den;
            for (const auto& prev : cands[k]) {
              if (std::fabs(prev.top - top) > eps * (1 - kSlack) || !negative) continue;
              std::array<FieldElt, 3> f = {prev.elt, x, *negative};
              std::size_t emb = 0;
              if (satisfies_sign_conditions(f, options.epsilon, &emb)) {
                SignPatternTriple out;
                out.f = f;
                out.embedding = emb;
                for (int i = 0; i < 3; ++i) out.patterns[i] = f[i].sign_pattern();
                out.height_used = static_cast<int>(h);
                return out;
              }
            }
            cands[k].push_back({x, top});
          }
        }
  }
  throw Error(ErrorCode::search_exhausted,
              "no triple found at height " + std::to_string(options.height) + " with denominators up to " +
                  std::to_string(options.max_den));
}

bool rational_square_check(const FieldElt& x) { return !((x * x).is_rational() && !x.is_rational()); }

std::size_t rational_square_sweep(const SymCubicField& field, int height) {
  std::size_t failures = 0;
  for (long a = -height; a <= height; ++a)
    for (long b = -height; b <= height; ++b)
      for (long c = -height; c <= height; ++c)
        if (!rational_square_check(field.element(a, b, c))) ++failures;
  return failures;
}

}  // namespace k3ks

// Dense univariate polynomials with exact coefficients.
#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "exact.hpp"

namespace oscillate {

template <class C>
class BasicPoly {
 public:
  using coeff_type = C;

  BasicPoly() = default;
  BasicPoly(C constant) {  // NOLINT(google-explicit-constructor)
    if (!constant.is_zero()) coeffs_.push_back(std::move(constant));
  }
  BasicPoly(std::initializer_list<C> lowest_first) : coeffs_(lowest_first) { trim(); }
  explicit BasicPoly(std::vector<C> lowest_first) : coeffs_(std::move(lowest_first)) { trim(); }

  /// The monomial c*t^k.
  static BasicPoly monomial(C c, std::size_t k) {
    std::vector<C> v(k + 1);
    v[k] = std::move(c);
    return BasicPoly(std::move(v));
  }
  /// t - root
  static BasicPoly linear_factor(const C& root) { return BasicPoly({-root, C(1)}); }

  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<C>& coeffs() const { return coeffs_; }
  const C& operator[](std::size_t k) const { return coeffs_[k]; }
  C coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : C(0); }
  const C& leading() const { return coeffs_.back(); }

  void set_coeff(std::size_t k, C c) {
    if (k >= coeffs_.size()) coeffs_.resize(k + 1);
    coeffs_[k] = std::move(c);
    trim();
  }

  C eval(const C& t) const {
    C acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  BasicPoly derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<C> v(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) v[k - 1] = coeffs_[k] * C(static_cast<long>(k));
    return BasicPoly(std::move(v));
  }

  /// Coefficient-wise conjugation (reflection in the real axis).
  BasicPoly conj() const {
    std::vector<C> v;
    v.reserve(coeffs_.size());
    for (const auto& c : coeffs_) v.push_back(c.conj());
    return BasicPoly(std::move(v));
  }

  /// p(t + shift), computed by repeated synthetic division.
  BasicPoly taylor_shift(const C& shift) const {
    std::vector<C> v = coeffs_;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) v[j - 1] += shift * v[j];
    return BasicPoly(std::move(v));
  }

  /// p(scale * t)
  BasicPoly scale_argument(const C& scale) const {
    std::vector<C> v = coeffs_;
    C power(1);
    for (auto& c : v) {
      c = c * power;
      power = power * scale;
    }
    return BasicPoly(std::move(v));
  }

  /// Number of trailing zero coefficients (order of vanishing at 0).
  std::size_t valuation() const {
    std::size_t k = 0;
    while (k < coeffs_.size() && coeffs_[k].is_zero()) ++k;
    return k;
  }
  /// p / t^k, requires k <= valuation().
  BasicPoly shift_down(std::size_t k) const {
    if (k > valuation()) throw Error(ErrorCode::InternalInconsistency, "shift_down past valuation");
    return BasicPoly(std::vector<C>(coeffs_.begin() + static_cast<long>(k), coeffs_.end()));
  }
  BasicPoly shift_up(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<C> v(k);
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return BasicPoly(std::move(v));
  }

  BasicPoly operator-() const {
    std::vector<C> v;
    v.reserve(coeffs_.size());
    for (const auto& c : coeffs_) v.push_back(-c);
    return BasicPoly(std::move(v));
  }
  BasicPoly& operator+=(const BasicPoly& b) {
    if (b.coeffs_.size() > coeffs_.size()) coeffs_.resize(b.coeffs_.size());
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) coeffs_[k] += b.coeffs_[k];
    trim();
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& b) {
    if (b.coeffs_.size() > coeffs_.size()) coeffs_.resize(b.coeffs_.size());
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) coeffs_[k] -= b.coeffs_[k];
    trim();
    return *this;
  }
  BasicPoly& operator*=(const BasicPoly& b) { return *this = *this * b; }

  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return BasicPoly(std::move(v));
  }
  friend BasicPoly operator*(const C& s, const BasicPoly& p) {
    if (s.is_zero()) return {};
    std::vector<C> v;
    v.reserve(p.coeffs_.size());
    for (const auto& c : p.coeffs_) v.push_back(s * c);
    return BasicPoly(std::move(v));
  }
  friend bool operator==(const BasicPoly& a, const BasicPoly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const BasicPoly& a, const BasicPoly& b) { return !(a == b); }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<C> coeffs_;
};

using Poly = BasicPoly<GaussianRational>;
using IntPoly = BasicPoly<GaussianInteger>;

template <class C>
BasicPoly<C> pow(const BasicPoly<C>& p, unsigned long e) {
  BasicPoly<C> result(C(1)), base = p;
  while (e) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

inline std::string to_string(const Poly& p, const std::string& var = "t") {
  if (p.is_zero()) return "0";
  std::string out;
  for (long k = p.degree(); k >= 0; --k) {
    const auto& c = p[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += to_string(c);
    if (k >= 1) out += "*" + var;
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field operations over Q(i)

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<GaussianRational> rem = a.coeffs();
  const auto db = static_cast<std::size_t>(b.degree());
  std::vector<GaussianRational> quot(rem.size() - db);
  const GaussianRational inv_lead = GaussianRational(1) / b.leading();
  for (std::size_t k = rem.size(); k-- > db;) {
    if (rem[k].is_zero()) continue;
    GaussianRational factor = rem[k] * inv_lead;
    quot[k - db] = factor;
    for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= factor * b[j];
  }
  rem.resize(db);
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

inline Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return (GaussianRational(1) / p.leading()) * p;
}

/// Exact quotient a/b; throws if b does not divide a.
inline Poly divide_exact(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error(ErrorCode::InternalInconsistency, "inexact polynomial division");
  return q;
}

inline bool divides(const Poly& d, const Poly& a) { return divmod(a, d).second.is_zero(); }

/// Multiplies by a rational so that all coefficients become Gaussian integers
/// with trivial integer content; the leading coefficient is kept nonzero.
inline Poly primitive_part(const Poly& p) {
  if (p.is_zero()) return p;
  Integer den = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), denominator_lcm(c).get_mpz_t());
  Integer g = 0;
  for (const auto& c : p.coeffs()) {
    Rational re = c.re * den, im = c.im * den;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), re.get_num_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), im.get_num_mpz_t());
  }
  Rational scale(den, g);
  scale.canonicalize();
  return GaussianRational(scale) * p;
}

inline Poly gcd(Poly a, Poly b) {
  // Euclid over Q(i), with primitive-part normalization to contain growth.
  a = primitive_part(a);
  b = primitive_part(b);
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = primitive_part(r);
  }
  return monic(a);
}

/// Monic gcd of a family of polynomials; throws AllZero if all are zero.
inline Poly poly_gcd(const std::vector<Poly>& ps) {
  Poly g;
  bool any = false;
  for (const auto& p : ps) {
    if (p.is_zero()) continue;
    g = any ? gcd(g, p) : monic(p);
    any = true;
    if (g.degree() == 0) break;
  }
  if (!any) throw Error(ErrorCode::AllZero, "gcd of zero polynomials");
  return g;
}

inline Poly poly_mul(const Poly& p, const Poly& q) { return p * q; }

/// Sum of absolute values of the coefficients.
inline Enclosure poly_norm(const Poly& p, unsigned bits = kDefaultSqrtBits) {
  Enclosure acc(Rational(0));
  for (const auto& c : p.coeffs())
    if (!c.is_zero()) acc += c.is_real() || c.re == 0 ? c.abs() : sqrt_enclosure(c.norm2(), bits);
  return acc;
}

/// Determinant by fraction-free elimination over Q(i).
inline GaussianRational determinant(std::vector<std::vector<GaussianRational>> m) {
  const std::size_t n = m.size();
  GaussianRational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return GaussianRational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    GaussianRational inv = GaussianRational(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      GaussianRational f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// Resultant via the Sylvester matrix.
inline GaussianRational resultant(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return GaussianRational(0);
  const auto da = static_cast<std::size_t>(a.degree());
  const auto db = static_cast<std::size_t>(b.degree());
  const std::size_t n = da + db;
  if (n == 0) return GaussianRational(1);
  std::vector<std::vector<GaussianRational>> s(n, std::vector<GaussianRational>(n));
  for (std::size_t r = 0; r < db; ++r)
    for (std::size_t k = 0; k <= da; ++k) s[r][r + k] = a[da - k];
  for (std::size_t r = 0; r < da; ++r)
    for (std::size_t k = 0; k <= db; ++k) s[db + r][r + k] = b[db - k];
  return determinant(std::move(s));
}

/// Discriminant of a polynomial of degree >= 1:
/// (-1)^(d(d-1)/2) Res(p, p') / lc(p).  Degree one gives 1.
inline GaussianRational discriminant(const Poly& p) {
  if (p.degree() < 1) throw Error(ErrorCode::InvalidArgument, "discriminant of a constant");
  if (p.degree() == 1) return GaussianRational(1);
  const long d = p.degree();
  GaussianRational res = resultant(p, p.derivative()) / p.leading();
  return ((d * (d - 1) / 2) % 2 == 1) ? -res : res;
}

/// Square-free decomposition (Yun): p = c * prod f_i^i with f_i monic,
/// square-free and pairwise coprime.  Returns pairs (f_i, i) for nonconstant f_i.
inline std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, unsigned>> out;
  if (p.degree() < 1) return out;
  Poly f = monic(p);
  Poly fp = f.derivative();
  Poly a = gcd(f, fp);
  Poly b = divide_exact(f, a);
  Poly c = divide_exact(fp, a);
  Poly d = c - b.derivative();
  unsigned i = 1;
  while (b.degree() >= 1) {
    Poly g = d.is_zero() ? b : gcd(b, d);
    if (g.degree() >= 1) out.emplace_back(monic(g), i);
    b = divide_exact(b, g);
    c = divide_exact(d, g);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Real polynomials: Sturm sequences

/// Number of distinct real roots of a polynomial with real coefficients.
inline std::size_t count_distinct_real_roots(const Poly& p) {
  for (const auto& c : p.coeffs())
    if (!c.is_real()) throw Error(ErrorCode::InvalidArgument, "Sturm sequence needs real coefficients");
  if (p.degree() < 1) return 0;
  std::vector<Poly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    Poly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    // primitive_part scales by a positive rational, so signs are preserved.
    seq.push_back(primitive_part(-r));
  }
  auto sign_changes = [&](bool at_plus_infinity) {
    int changes = 0, prev = 0;
    for (const auto& q : seq) {
      if (q.is_zero()) continue;
      int s = q.leading().re > 0 ? 1 : -1;
      if (!at_plus_infinity && q.degree() % 2 == 1) s = -s;
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
    return changes;
  };
  return static_cast<std::size_t>(sign_changes(false) - sign_changes(true));
}

/// True iff every root of p (real coefficients) is real.
inline bool all_roots_real(const Poly& p) {
  if (p.degree() < 1) return true;
  Poly sqf = divide_exact(p, gcd(p, p.derivative()));
  return count_distinct_real_roots(sqf) == static_cast<std::size_t>(sqf.degree());
}

// ---------------------------------------------------------------------------
// Conversions between Q(i)[t] and Z[i][t]

/// Scales p by the lcm of its coefficient denominators and returns the
/// resulting integer polynomial together with the scale.
inline std::pair<IntPoly, Integer> clear_denominators(const Poly& p) {
  Integer den = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), denominator_lcm(c).get_mpz_t());
  std::vector<GaussianInteger> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) {
    Rational re = c.re * den, im = c.im * den;
    v.emplace_back(Integer(re.get_num()), Integer(im.get_num()));
  }
  return {IntPoly(std::move(v)), den};
}

inline IntPoly scale_to_integer(const Poly& p, const Integer& den) {
  std::vector<GaussianInteger> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) {
    Rational re = c.re * den, im = c.im * den;
    if (re.get_den() != 1 || im.get_den() != 1)
      throw Error(ErrorCode::InternalInconsistency, "scale does not clear denominators");
    v.emplace_back(Integer(re.get_num()), Integer(im.get_num()));
  }
  return IntPoly(std::move(v));
}

inline Poly to_rational(const IntPoly& p) {
  std::vector<GaussianRational> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) v.push_back(to_rational(c));
  return Poly(std::move(v));
}

/// Exact division of an integer polynomial by a Gaussian integer.
inline IntPoly divexact(const IntPoly& p, const GaussianInteger& d) {
  std::vector<GaussianInteger> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) v.push_back(divexact(c, d));
  return IntPoly(std::move(v));
}

/// Exact division of integer polynomials (the quotient is known to lie in Z[i][t]).
inline IntPoly divexact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero polynomial");
  if (a.is_zero()) return {};
  if (b.degree() == 0) return divexact(a, b.leading());
  if (a.degree() < b.degree()) throw Error(ErrorCode::InternalInconsistency, "inexact integer division");
  std::vector<GaussianInteger> rem = a.coeffs();
  const auto db = static_cast<std::size_t>(b.degree());
  std::vector<GaussianInteger> quot(rem.size() - db);
  for (std::size_t k = rem.size(); k-- > db;) {
    if (rem[k].is_zero()) continue;
    GaussianInteger factor = divexact(rem[k], b.leading());
    for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= factor * b[j];
    quot[k - db] = std::move(factor);
  }
  for (std::size_t k = 0; k < db; ++k)
    if (!rem[k].is_zero()) throw Error(ErrorCode::InternalInconsistency, "inexact integer division");
  return IntPoly(std::move(quot));
}

/// gcd of all integer coefficients (real and imaginary parts).
inline Integer integer_content(const IntPoly& p) {
  Integer g = 0;
  for (const auto& c : p.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.re.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.im.get_mpz_t());
  }
  return g;
}

inline std::size_t max_coeff_bits(const IntPoly& p) {
  std::size_t b = 0;
  for (const auto& c : p.coeffs()) b = std::max(b, c.bits());
  return b;
}

}  // namespace oscillate

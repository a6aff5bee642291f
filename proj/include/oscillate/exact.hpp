// Exact scalar arithmetic over Q(i) and Z[i], plus rational enclosures of
// irrational quantities (square roots, norms).
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace oscillate {

using Integer = mpz_class;
using Rational = mpq_class;

enum class ErrorCode {
  AllZero,
  DuplicatePoles,
  ResidueSumNonzero,
  IndeterminateSpectrum,
  ZeroDiscriminant,
  InvalidArgument,
  ParseError,
  OnZeroLocus,
  ArcTooClose,
  NotFuchsianLocal,
  MonodromyNotUnitModulus,
  SpectralClassViolation,
  InternalInconsistency,
  ClearanceLost,
  ToleranceUnreachable,
  ZeroOnArc,
  ZeroOnBoundary,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::DuplicatePoles: return "DuplicatePoles";
    case ErrorCode::ResidueSumNonzero: return "ResidueSumNonzero";
    case ErrorCode::IndeterminateSpectrum: return "IndeterminateSpectrum";
    case ErrorCode::ZeroDiscriminant: return "ZeroDiscriminant";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OnZeroLocus: return "OnZeroLocus";
    case ErrorCode::ArcTooClose: return "ArcTooClose";
    case ErrorCode::NotFuchsianLocal: return "NotFuchsianLocal";
    case ErrorCode::MonodromyNotUnitModulus: return "MonodromyNotUnitModulus";
    case ErrorCode::SpectralClassViolation: return "SpectralClassViolation";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::ClearanceLost: return "ClearanceLost";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::ZeroOnArc: return "ZeroOnArc";
    case ErrorCode::ZeroOnBoundary: return "ZeroOnBoundary";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Rational helpers

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational abs(const Rational& q) { return ::abs(q); }

inline std::size_t bit_length(const Integer& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

/// Complexity of an irreducible fraction p/q, i.e. |p| + |q|.
inline Integer rational_complexity(const Rational& q) {
  return ::abs(q.get_num()) + ::abs(q.get_den());
}

/// Parses "p/q", "-p/q", integers and plain decimals ("0.25", "-1.5e-3") exactly.
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '_') s.push_back(c);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  Integer mantissa = 0;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --exponent;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      ++pos;
      if (pos >= s.size()) throw Error(ErrorCode::ParseError, "bad exponent in '" + text + "'");
      try {
        std::size_t used = 0;
        long e = std::stol(s.substr(pos), &used);
        if (pos + used != s.size()) throw std::invalid_argument("trailing");
        exponent += e;
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad exponent in '" + text + "'");
      }
      pos = s.size();
      break;
    } else {
      throw Error(ErrorCode::ParseError, "unexpected character in rational '" + text + "'");
    }
  }
  if (!seen_digit) throw Error(ErrorCode::ParseError, "no digits in '" + text + "'");
  if (exponent > 4096 || exponent < -4096)
    throw Error(ErrorCode::ParseError, "exponent out of range in '" + text + "'");
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational round_up(const Rational& q, unsigned bits = 64);

/// Largest dyadic number with `bits` significant bits that is <= q.
inline Rational round_down(const Rational& q, unsigned bits = 64) {
  if (q == 0) return q;
  if (q < 0) {
    Rational neg = -q;
    return -round_up(neg, bits);
  }
  // q > 0: q = num/den; find e with 2^(bits-1) <= q*2^e < 2^bits
  long e = static_cast<long>(bits) - (static_cast<long>(bit_length(q.get_num())) -
                                      static_cast<long>(bit_length(q.get_den())));
  Integer scaled_num = q.get_num();
  Integer scaled_den = q.get_den();
  if (e >= 0)
    scaled_num <<= static_cast<mp_bitcnt_t>(e);
  else
    scaled_den <<= static_cast<mp_bitcnt_t>(-e);
  Integer floor_val;
  mpz_fdiv_q(floor_val.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  Rational r;
  if (e >= 0) {
    Integer den = 1;
    den <<= static_cast<mp_bitcnt_t>(e);
    r = Rational(floor_val, den);
  } else {
    Integer num = floor_val;
    num <<= static_cast<mp_bitcnt_t>(-e);
    r = Rational(num);
  }
  r.canonicalize();
  return r;
}

/// Smallest dyadic number with `bits` significant bits that is >= q.
inline Rational round_up(const Rational& q, unsigned bits) {
  if (q == 0) return q;
  if (q < 0) return -round_down(-q, bits);
  long e = static_cast<long>(bits) - (static_cast<long>(bit_length(q.get_num())) -
                                      static_cast<long>(bit_length(q.get_den())));
  Integer scaled_num = q.get_num();
  Integer scaled_den = q.get_den();
  if (e >= 0)
    scaled_num <<= static_cast<mp_bitcnt_t>(e);
  else
    scaled_den <<= static_cast<mp_bitcnt_t>(-e);
  Integer ceil_val;
  mpz_cdiv_q(ceil_val.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  Rational r;
  if (e >= 0) {
    Integer den = 1;
    den <<= static_cast<mp_bitcnt_t>(e);
    r = Rational(ceil_val, den);
  } else {
    Integer num = ceil_val;
    num <<= static_cast<mp_bitcnt_t>(-e);
    r = Rational(num);
  }
  r.canonicalize();
  return r;
}

inline Rational pow(const Rational& base, unsigned long exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Exact conversion of a finite binary floating value to a rational.
inline Rational rational_from_double(double x) {
  Rational q(x);
  q.canonicalize();
  return q;
}

inline Rational rational_from_long_double(long double x) {
  // long double mantissa is 64 bits: split into two doubles exactly.
  double hi = static_cast<double>(x);
  double lo = static_cast<double>(x - static_cast<long double>(hi));
  Rational q = Rational(hi) + Rational(lo);
  q.canonicalize();
  return q;
}

/// Nearest rational with denominator 2^bits (used to snap numeric search
/// results onto exactly representable points).
inline Rational snap_dyadic(long double x, unsigned bits) {
  Rational exact = rational_from_long_double(x);
  Integer den = 1;
  den <<= bits;
  Rational scaled = exact * den + Rational(1, 2);
  Integer num;
  mpz_fdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline long double to_long_double(const Rational& q) {
  // mpq_get_d truncates; long double keeps more bits via a two-term split.
  double hi = q.get_d();
  Rational rest = q - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

// ---------------------------------------------------------------------------
// Enclosures

/// Closed interval [lo, hi] with rational endpoints enclosing a real value.
struct Enclosure {
  Rational lo;
  Rational hi;

  Enclosure() = default;
  explicit Enclosure(const Rational& exact) : lo(exact), hi(exact) {}
  Enclosure(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw Error(ErrorCode::InternalInconsistency, "enclosure with lo > hi");
  }

  bool is_exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  long double approx() const { return to_long_double(mid()); }

  /// Outward rounding of both endpoints to dyadics of `bits` significant bits.
  Enclosure rounded(unsigned bits = 80) const { return Enclosure(round_down(lo, bits), round_up(hi, bits)); }

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  friend Enclosure operator*(const Rational& s, const Enclosure& a) {
    return s >= 0 ? Enclosure(s * a.lo, s * a.hi) : Enclosure(s * a.hi, s * a.lo);
  }
  /// Division by an enclosure that excludes zero.
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b) {
    if (b.lo <= 0 && b.hi >= 0) throw Error(ErrorCode::InternalInconsistency, "division by enclosure containing 0");
    Rational c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  Enclosure& operator+=(const Enclosure& b) { return *this = *this + b; }

  friend Enclosure max(const Enclosure& a, const Enclosure& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
  }
  friend bool certainly_le(const Enclosure& a, const Enclosure& b) { return a.hi <= b.lo; }
  friend bool certainly_lt(const Enclosure& a, const Enclosure& b) { return a.hi < b.lo; }
};

inline std::ostream& operator<<(std::ostream& os, const Enclosure& e) {
  return os << "[" << to_string(e.lo) << ", " << to_string(e.hi) << "]";
}

/// Default relative width for square-root enclosures.
inline constexpr unsigned kDefaultSqrtBits = 64;

/// Enclosure of sqrt(x), x >= 0, with relative width <= 2^-bits.  Exact when
/// x is the square of a rational.
inline Enclosure sqrt_enclosure(const Rational& x, unsigned bits = kDefaultSqrtBits) {
  if (x < 0) throw Error(ErrorCode::InvalidArgument, "sqrt of negative rational");
  if (x == 0) return Enclosure(Rational(0));
  const Integer& p = x.get_num();
  const Integer& q = x.get_den();
  if (mpz_perfect_square_p(p.get_mpz_t()) && mpz_perfect_square_p(q.get_mpz_t())) {
    Integer sp, sq;
    mpz_sqrt(sp.get_mpz_t(), p.get_mpz_t());
    mpz_sqrt(sq.get_mpz_t(), q.get_mpz_t());
    Rational r(sp, sq);
    r.canonicalize();
    return Enclosure(r);
  }
  // sqrt(p/q) = sqrt(p*q*4^e) / (q*2^e)
  Integer pq = p * q;
  long needed = 2 * static_cast<long>(bits + 2) - static_cast<long>(bit_length(pq));
  unsigned long e = needed > 0 ? static_cast<unsigned long>((needed + 1) / 2) : 0;
  Integer scaled = pq;
  scaled <<= static_cast<mp_bitcnt_t>(2 * e);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Integer den = q;
  den <<= static_cast<mp_bitcnt_t>(e);
  Rational lo(root, den), hi(root + 1, den);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

inline Enclosure sqrt_enclosure(const Enclosure& x, unsigned bits = kDefaultSqrtBits) {
  Rational lo = x.lo < 0 ? Rational(0) : x.lo;
  return {sqrt_enclosure(lo, bits).lo, sqrt_enclosure(x.hi, bits).hi};
}

/// Enclosure of base^exponent for base >= 0.
inline Enclosure pow(const Enclosure& base, unsigned long exponent) {
  return {pow(base.lo, exponent), pow(base.hi, exponent)};
}

// ---------------------------------------------------------------------------
// Gaussian rationals

struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  /// |z|^2, an exact rational.
  Rational norm2() const { return re * re + im * im; }
  Enclosure abs() const {
    if (im == 0) return Enclosure(::abs(re));
    if (re == 0) return Enclosure(::abs(im));
    return sqrt_enclosure(norm2());
  }
  /// Complexity in the sense of sum of |p|+|q| over both components.
  Integer complexity() const { return rational_complexity(re) + rational_complexity(im); }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    if (a.im == 0 && b.im == 0) return {a.re * b.re, Rational(0)};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero in Q(i)");
    if (b.im == 0) return {a.re / b.re, a.im / b.re};
    Rational d = b.norm2();
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

using ExactScalar = GaussianRational;

inline std::string to_string(const GaussianRational& z) {
  if (z.im == 0) return to_string(z.re);
  return "(" + to_string(z.re) + (z.im < 0 ? " - " : " + ") + to_string(::abs(z.im)) + "i)";
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << to_string(z); }

inline GaussianRational pow(const GaussianRational& z, unsigned long e) {
  GaussianRational result(1), base = z;
  while (e) {
    if (e & 1UL) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// Least common multiple of the denominators of both components.
inline Integer denominator_lcm(const GaussianRational& z) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), z.re.get_den_mpz_t(), z.im.get_den_mpz_t());
  return l;
}

// ---------------------------------------------------------------------------
// Gaussian integers (used by the fraction-free elimination kernels)

struct GaussianInteger {
  Integer re;
  Integer im;

  GaussianInteger() = default;
  GaussianInteger(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianInteger(Integer r) : re(std::move(r)), im(0) {}  // NOLINT
  GaussianInteger(Integer r, Integer i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianInteger conj() const { return {re, -im}; }
  Integer norm2() const { return re * re + im * im; }
  std::size_t bits() const { return std::max(bit_length(re), bit_length(im)); }

  GaussianInteger operator-() const { return {-re, -im}; }
  GaussianInteger& operator+=(const GaussianInteger& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  GaussianInteger& operator-=(const GaussianInteger& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  GaussianInteger& operator*=(const GaussianInteger& b) { return *this = *this * b; }

  friend GaussianInteger operator+(GaussianInteger a, const GaussianInteger& b) { return a += b; }
  friend GaussianInteger operator-(GaussianInteger a, const GaussianInteger& b) { return a -= b; }
  friend GaussianInteger operator*(const GaussianInteger& a, const GaussianInteger& b) {
    if (a.im == 0 && b.im == 0) return {a.re * b.re, Integer(0)};
    GaussianInteger r;
    r.re = a.re * b.re - a.im * b.im;
    r.im = a.re * b.im + a.im * b.re;
    return r;
  }
  friend bool operator==(const GaussianInteger& a, const GaussianInteger& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussianInteger& a, const GaussianInteger& b) { return !(a == b); }
};

/// a / b where the division is known to be exact in Z[i].
inline GaussianInteger divexact(const GaussianInteger& a, const GaussianInteger& b) {
  if (b.im == 0) {
    GaussianInteger r;
    mpz_divexact(r.re.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
    mpz_divexact(r.im.get_mpz_t(), a.im.get_mpz_t(), b.re.get_mpz_t());
    return r;
  }
  Integer d = b.norm2();
  Integer nr = a.re * b.re + a.im * b.im;
  Integer ni = a.im * b.re - a.re * b.im;
  GaussianInteger r;
  mpz_divexact(r.re.get_mpz_t(), nr.get_mpz_t(), d.get_mpz_t());
  mpz_divexact(r.im.get_mpz_t(), ni.get_mpz_t(), d.get_mpz_t());
  return r;
}

inline GaussianRational to_rational(const GaussianInteger& z) { return {Rational(z.re), Rational(z.im)}; }

}  // namespace oscillate

// Floating complex numbers over a configurable real type, and conversions
// between floating values and exact rationals.
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <string>
#include <type_traits>

#include "exact.hpp"

namespace oscillate {

namespace mp = boost::multiprecision;

using Real64 = long double;
using Real128 = mp::number<mp::cpp_bin_float<128, mp::digit_base_2>, mp::et_off>;
using Real256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;

template <class T>
inline T real_from_rational(const Rational& q) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(to_long_double(q));
  } else {
    return T(q.get_num().get_str()) / T(q.get_den().get_str());
  }
}

/// Exact rational value of a binary floating number.
template <class T>
inline Rational rational_from_real(const T& x) {
  if constexpr (std::is_floating_point_v<T>) {
    return rational_from_long_double(static_cast<long double>(x));
  } else {
    Rational acc = 0;
    T rest = x;
    for (int chunk = 0; chunk < 8 && rest != 0; ++chunk) {
      double hi = static_cast<double>(rest);
      acc += Rational(hi);
      rest -= T(hi);
    }
    return acc;
  }
}

template <class T>
inline long double to_ld(const T& x) {
  return static_cast<long double>(x);
}

template <class T>
struct Cplx {
  T re{0};
  T im{0};

  Cplx() = default;
  Cplx(T r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Cplx(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  Cplx(int r) : re(r), im(0) {}  // NOLINT

  template <class U>
  static Cplx from(const Cplx<U>& z) {
    return {T(z.re), T(z.im)};
  }
  static Cplx from_exact(const GaussianRational& z) {
    return {real_from_rational<T>(z.re), real_from_rational<T>(z.im)};
  }
  static Cplx polar(const T& r, const T& theta) {
    using std::cos;
    using std::sin;
    return {r * cos(theta), r * sin(theta)};
  }

  Cplx conj() const { return {re, -im}; }
  T norm2() const { return re * re + im * im; }
  T abs() const {
    using std::hypot;
    return hypot(re, im);
  }
  T arg() const {
    using std::atan2;
    return atan2(im, re);
  }

  Cplx operator-() const { return {-re, -im}; }
  Cplx& operator+=(const Cplx& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  Cplx& operator-=(const Cplx& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  Cplx& operator*=(const Cplx& b) { return *this = *this * b; }
  Cplx& operator/=(const Cplx& b) { return *this = *this / b; }

  friend Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
  friend Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator*(const T& s, const Cplx& a) { return {s * a.re, s * a.im}; }
  friend Cplx operator/(const Cplx& a, const Cplx& b) {
    using std::abs;
    // Smith's algorithm
    if (abs(b.re) >= abs(b.im)) {
      T r = b.im / b.re, d = b.re + r * b.im;
      return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    T r = b.re / b.im, d = b.im + r * b.re;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
  }
  friend bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
inline T abs(const Cplx<T>& z) {
  return z.abs();
}

template <class T>
inline Cplx<T> exp(const Cplx<T>& z) {
  using std::exp;
  return Cplx<T>::polar(exp(z.re), z.im);
}

template <class T>
inline Cplx<T> log(const Cplx<T>& z) {
  using std::log;
  return {log(z.abs()), z.arg()};
}

template <class T>
inline Cplx<T> powi(Cplx<T> z, unsigned long e) {
  Cplx<T> r(T(1));
  while (e) {
    if (e & 1UL) r *= z;
    e >>= 1;
    if (e) z *= z;
  }
  return r;
}

template <class T>
inline T pi_value() {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(3.141592653589793238462643383279502884L);
  } else {
    return boost::math::constants::pi<T>();
  }
}

using Complex = Cplx<long double>;

/// Exact Gaussian rational equal to a floating complex value.
template <class T>
inline GaussianRational exact_from(const Cplx<T>& z) {
  return {rational_from_real(z.re), rational_from_real(z.im)};
}

/// Gaussian rational near z with small dyadic denominators (2^bits).
inline GaussianRational snap(const Complex& z, unsigned bits) {
  return {snap_dyadic(z.re, bits), snap_dyadic(z.im, bits)};
}

inline Complex to_complex(const GaussianRational& z) { return Complex::from_exact(z); }

}  // namespace oscillate

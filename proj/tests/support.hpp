// Shared fixtures and hand-rolled generators for the test suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <oscillate/oscillate.hpp>

namespace fx {

using namespace oscillate;

inline GaussianRational gq(long re, long im = 0) { return {Rational(re), Rational(im)}; }
inline GaussianRational gs(const char* re, const char* im = "0") {
  return {parse_rational(re), parse_rational(im)};
}

/// dx = (A/t) x dt, poles {0, inf}.
inline FuchsianSystem euler(const ExactMatrix& a) {
  FuchsianSystem s;
  s.n = a.rows();
  s.poles = {SpherePoint(GaussianRational(0)), SpherePoint::infinity()};
  s.residues = {a, -a};
  return s;
}

inline FuchsianSystem euler_diag(long N) { return euler(ExactMatrix{{gq(N), gq(0)}, {gq(0), gq(0)}}); }
inline FuchsianSystem euler_rotation() { return euler(ExactMatrix{{gq(0), gq(1)}, {gq(-1), gq(0)}}); }
inline FuchsianSystem euler_scalar(long a) { return euler(ExactMatrix{{gq(a)}}); }

/// Poles {0, eps, 1/eps, inf} with nilpotent residues.
inline FuchsianSystem nilpotent_family(const Rational& eps) {
  ExactMatrix a0{{gq(0), gq(1)}, {gq(0), gq(0)}};
  ExactMatrix ae{{gq(0), gq(0)}, {gq(-1), gq(0)}};
  FuchsianSystem s;
  s.n = 2;
  s.poles = {SpherePoint(GaussianRational(0)), SpherePoint(GaussianRational(eps)),
             SpherePoint(GaussianRational(Rational(1) / eps)), SpherePoint::infinity()};
  s.residues = {a0, ae, -ae, -a0};
  return s;
}

inline Rational rand_rational(std::mt19937_64& rng, long num_bound, long den_bound) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline GaussianRational rand_gauss(std::mt19937_64& rng, long num_bound = 5, long den_bound = 4) {
  return {rand_rational(rng, num_bound, den_bound), rand_rational(rng, num_bound, den_bound)};
}

inline Poly rand_poly(std::mt19937_64& rng, std::size_t degree, long num_bound = 5, long den_bound = 4) {
  std::vector<GaussianRational> c;
  for (std::size_t k = 0; k <= degree; ++k) c.push_back(rand_gauss(rng, num_bound, den_bound));
  if (c.back().is_zero()) c.back() = GaussianRational(1);
  return Poly(c);
}

inline ExactMatrix rand_matrix(std::mt19937_64& rng, std::size_t n, long bound = 2) {
  std::uniform_int_distribution<long> e(-bound, bound);
  ExactMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = gq(e(rng), e(rng));
  return a;
}

/// |y| where y = sum c_k t^k, in long double.
inline Complex eval_ld(const Poly& p, const Complex& t) {
  Complex acc(0);
  for (long k = p.degree(); k >= 0; --k) acc = acc * t + to_complex(p[static_cast<std::size_t>(k)]);
  return acc;
}

inline long double ld(const Rational& q) { return to_long_double(q); }

}  // namespace fx

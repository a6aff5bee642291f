// Certified complex root isolation.  Approximations come from the Aberth
// iteration in floating arithmetic; inclusion disks are then certified
// exactly with the Braess-Hadeler form of the Weierstrass correction:
// every root lies in the union of the disks |z - z_j| <= d |W_j|, and each
// connected component of k disks holds exactly k roots.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "complex.hpp"
#include "exact.hpp"
#include "poly.hpp"

namespace oscillate {

/// Closed disk |z - center| <= radius holding `multiplicity` roots.
struct RootDisk {
  GaussianRational center;
  Rational radius;
  unsigned multiplicity = 1;

  Complex approx() const { return to_complex(center); }
};

namespace detail {

template <class T>
std::vector<Cplx<T>> aberth(const std::vector<Cplx<T>>& c, int max_iter, const T& eps) {
  const std::size_t d = c.size() - 1;
  std::vector<Cplx<T>> z(d);
  if (d == 0) return z;
  using std::pow;
  // Fujiwara-type radius for the starting circle.
  T lead = c[d].abs();
  T rad(0);
  for (std::size_t k = 0; k < d; ++k) {
    T ratio = c[k].abs() / lead;
    if (ratio == 0) continue;
    T r = pow(ratio, T(1) / T(static_cast<long>(d - k)));
    if (r > rad) rad = r;
  }
  if (rad == 0) rad = 1;
  const T two_pi = 2 * pi_value<T>();
  for (std::size_t j = 0; j < d; ++j)
    z[j] = Cplx<T>::polar(rad, two_pi * T(static_cast<long>(j)) / T(static_cast<long>(d)) + T(0.4L));

  std::vector<bool> done(d, false);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool all_done = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (done[j]) continue;
      Cplx<T> p = c[d], dp(T(0));
      for (std::size_t k = d; k-- > 0;) {
        dp = dp * z[j] + p;
        p = p * z[j] + c[k];
      }
      if (p.re == 0 && p.im == 0) {
        done[j] = true;
        continue;
      }
      Cplx<T> ratio = p / dp;
      Cplx<T> sum(T(0));
      for (std::size_t k = 0; k < d; ++k)
        if (k != j) sum += Cplx<T>(T(1)) / (z[j] - z[k]);
      Cplx<T> step = ratio / (Cplx<T>(T(1)) - ratio * sum);
      z[j] -= step;
      T scale = std::max(T(1), z[j].abs());
      if (step.abs() <= eps * scale)
        done[j] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  return z;
}

template <class T>
std::vector<GaussianRational> approximate_roots(const Poly& f) {
  std::vector<Cplx<T>> c;
  c.reserve(f.size());
  for (const auto& a : f.coeffs()) c.push_back(Cplx<T>::from_exact(a));
  using std::numeric_limits;
  T eps = numeric_limits<T>::epsilon() * 4;
  auto z = aberth<T>(c, 2000, eps);
  std::vector<GaussianRational> out;
  out.reserve(z.size());
  for (const auto& w : z) out.push_back(exact_from(w));
  return out;
}

inline Rational norm2_lower(const GaussianRational& z) { return round_down(z.norm2(), 96); }

/// Certified radii d*|W_j| (upper bounds) for a square-free f and exact points z.
inline std::vector<Rational> weierstrass_radii(const Poly& f, const std::vector<GaussianRational>& z) {
  const std::size_t d = z.size();
  std::vector<Rational> radii(d);
  const Rational lead2 = f.leading().norm2();
  for (std::size_t j = 0; j < d; ++j) {
    Rational num = round_up(f.eval(z[j]).norm2(), 96);
    if (num == 0) {
      radii[j] = 0;
      continue;
    }
    Rational den = round_down(lead2, 96);
    bool collide = false;
    for (std::size_t k = 0; k < d && !collide; ++k) {
      if (k == j) continue;
      Rational dist2 = norm2_lower(z[j] - z[k]);
      if (dist2 == 0) collide = true;
      den = round_down(den * dist2, 96);
    }
    if (collide || den == 0) {
      radii[j] = -1;  // signals failure
      continue;
    }
    Rational w2 = round_up(num / den, 96);
    radii[j] = round_up(Rational(static_cast<long>(d)) * sqrt_enclosure(w2, 48).hi, 64);
  }
  return radii;
}

inline bool disks_overlap(const RootDisk& a, const RootDisk& b) {
  Rational s = a.radius + b.radius;
  return (a.center - b.center).norm2() <= s * s;
}

/// Merges overlapping disks into enclosing disks until all are disjoint.
inline std::vector<RootDisk> merge_overlapping(std::vector<RootDisk> disks) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < disks.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < disks.size() && !merged; ++j) {
        if (!disks_overlap(disks[i], disks[j])) continue;
        const RootDisk& a = disks[i];
        const RootDisk& b = disks[j];
        GaussianRational c = (a.center + b.center) * GaussianRational(Rational(1, 2));
        Rational half = sqrt_enclosure((a.center - b.center).norm2(), 48).hi / 2;
        RootDisk u{c, round_up(half + std::max(a.radius, b.radius), 64), a.multiplicity + b.multiplicity};
        disks.erase(disks.begin() + static_cast<long>(j));
        disks[i] = u;
        merged = true;
      }
  }
  return disks;
}

/// Continued-fraction approximation of x with denominator <= max_den.
inline Rational small_rational(long double x, long max_den) {
  long double rest = x;
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 40; ++it) {
    long double a = std::floor(rest);
    if (std::fabs(a) > 1e18L) break;
    Integer ai = static_cast<long>(a);
    Integer h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    long double frac = rest - a;
    if (frac < 1e-18L) break;
    rest = 1 / frac;
  }
  if (k1 == 0) return Rational(0);
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

/// Replaces approximations that snap to an exact Gaussian-rational root.
inline std::vector<bool> snap_exact_roots(const Poly& f, std::vector<GaussianRational>& z) {
  std::vector<bool> exact(z.size(), false);
  for (std::size_t j = 0; j < z.size(); ++j) {
    GaussianRational c{small_rational(to_long_double(z[j].re), 1L << 20),
                       small_rational(to_long_double(z[j].im), 1L << 20)};
    if (f.eval(c).is_zero()) {
      z[j] = c;
      exact[j] = true;
    }
  }
  return exact;
}

template <class T>
bool isolate_squarefree(const Poly& f, const Rational& target, std::vector<RootDisk>& out, bool last) {
  auto z = approximate_roots<T>(f);
  snap_exact_roots(f, z);
  auto radii = weierstrass_radii(f, z);
  for (const auto& r : radii)
    if (r < 0) return false;
  std::vector<RootDisk> disks;
  for (std::size_t j = 0; j < z.size(); ++j) disks.push_back({z[j], radii[j], 1});
  bool small = std::all_of(radii.begin(), radii.end(), [&](const Rational& r) { return r <= target; });
  bool separated = true;
  for (std::size_t i = 0; i < disks.size() && separated; ++i)
    for (std::size_t j = i + 1; j < disks.size() && separated; ++j)
      if (disks_overlap(disks[i], disks[j])) separated = false;
  if (!(small && separated) && !last) return false;
  auto merged = merge_overlapping(std::move(disks));
  out.insert(out.end(), merged.begin(), merged.end());
  return true;
}

}  // namespace detail

/// Disjoint disks covering all roots of p, with multiplicities summing to deg p.
/// Radii are driven below `target` when the precision ladder allows it.
inline std::vector<RootDisk> isolate_roots(const Poly& p, const Rational& target = pow(Rational(1, 2), 32)) {
  std::vector<RootDisk> all;
  if (p.degree() < 1) return all;
  for (const auto& [f, mult] : squarefree_decomposition(p)) {
    std::vector<RootDisk> part;
    if (f.degree() == 1) {
      part.push_back({-(f[0] / f[1]), Rational(0), 1});
    } else if (!detail::isolate_squarefree<Real64>(f, target, part, false) &&
               !detail::isolate_squarefree<Real128>(f, target, part, false)) {
      detail::isolate_squarefree<Real256>(f, target, part, true);
    }
    for (auto& d : part) d.multiplicity *= mult;
    all.insert(all.end(), part.begin(), part.end());
  }
  all = detail::merge_overlapping(std::move(all));
  std::sort(all.begin(), all.end(), [](const RootDisk& a, const RootDisk& b) {
    if (a.center.re != b.center.re) return a.center.re < b.center.re;
    return a.center.im < b.center.im;
  });
  return all;
}

/// Lower bound for the distance from t to the nearest root (0 if t may be a root).
inline Rational root_distance_lower(const std::vector<RootDisk>& roots, const GaussianRational& t) {
  Rational best = -1;
  for (const auto& d : roots) {
    Rational lo = sqrt_enclosure((t - d.center).norm2(), 48).lo - d.radius;
    if (lo < 0) lo = 0;
    if (best < 0 || lo < best) best = lo;
  }
  return best < 0 ? Rational(0) : best;
}

enum class DiskSide { Inside, Outside, Ambiguous };

/// Position of a root disk relative to the closed disk |z| <= rho.
inline DiskSide classify(const RootDisk& d, const Rational& rho) {
  Enclosure c = sqrt_enclosure(d.center.norm2(), 48);
  if (c.hi + d.radius <= rho) return DiskSide::Inside;
  if (c.lo - d.radius > rho) return DiskSide::Outside;
  return DiskSide::Ambiguous;
}

}  // namespace oscillate

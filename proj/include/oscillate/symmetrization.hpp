// Reflection in a line, the doubled system diag(Omega, Omega^dagger), and
// the choice of a symmetry axis through a given point.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "complex.hpp"
#include "reduction.hpp"
#include "system.hpp"

namespace oscillate {

/// Line through `base` with unit direction `direction` (|direction| = 1 exactly).
struct AxisSpec {
  GaussianRational base;
  GaussianRational direction = GaussianRational(1);
  /// Target angle in units of pi; `direction` is its Pythagorean approximant.
  Rational angle_over_pi = 0;

  static AxisSpec real_axis() { return {}; }
  /// t -> base + u^2 conj(t - base).
  GaussianRational reflect(const GaussianRational& t) const {
    return base + direction * direction * (t - base).conj();
  }
  /// Coordinate s = conj(u) (t - base) in which the axis is the real line.
  GaussianRational to_axis_chart(const GaussianRational& t) const { return direction.conj() * (t - base); }
  GaussianRational from_axis_chart(const GaussianRational& s) const { return base + direction * s; }
  bool on_axis(const GaussianRational& t) const { return to_axis_chart(t).is_real(); }
};

/// Exact unit Gaussian rational close to exp(i theta), theta in (-pi/2, pi/2].
inline GaussianRational pythagorean_direction(long double theta, unsigned bits = 8) {
  Rational t = snap_dyadic(std::tan(theta / 2), bits);
  Rational den = 1 + t * t;
  return {(1 - t * t) / den, 2 * t / den};
}

/// p(a t + b).
inline Poly compose_linear(const Poly& p, const GaussianRational& a, const GaussianRational& b) {
  return p.taylor_shift(b).scale_argument(a);
}

/// Reflection p^dagger in the axis: conj(p(R(t))), with R the mirror map.
inline Poly reflect(const Poly& p, const AxisSpec& axis) {
  const GaussianRational& u = axis.direction;
  Poly q = compose_linear(p, u, axis.base).conj();  // (p o phi)^dagger
  return compose_linear(q, u.conj(), -(u.conj() * axis.base));
}

/// Reflected system: poles R(tau_j), residues conj(A_j).
inline FuchsianSystem reflect(const FuchsianSystem& s, const AxisSpec& axis) {
  FuchsianSystem r;
  r.n = s.n;
  for (std::size_t j = 0; j < s.poles.size(); ++j) {
    r.poles.push_back(s.poles[j].infinite ? SpherePoint::infinity() : SpherePoint(axis.reflect(s.poles[j].value)));
    r.residues.push_back(s.residues[j].conj());
  }
  return r;
}

/// The same system written in the axis chart s = conj(u)(t - base).
inline FuchsianSystem to_axis_chart(const FuchsianSystem& s, const AxisSpec& axis) {
  FuchsianSystem r = s;
  for (auto& p : r.poles)
    if (p.is_finite()) p.value = axis.to_axis_chart(p.value);
  return r;
}

namespace detail {

inline Rational mirror_objective(const std::vector<GaussianRational>& poles, const AxisSpec& axis) {
  Rational best = -1;
  for (std::size_t a = 0; a < poles.size(); ++a)
    for (std::size_t b = 0; b < poles.size(); ++b) {
      if (a == b && axis.on_axis(poles[a])) continue;
      Rational d2 = (poles[a] - axis.reflect(poles[b])).norm2();
      if (best < 0 || d2 < best) best = d2;
    }
  return best;
}

}  // namespace detail

/// Axis through `center` maximizing the minimal distance between the finite
/// poles and their mirror images, over 4 m^2 candidate directions.
inline AxisSpec choose_axis(const FuchsianSystem& s, const GaussianRational& center, unsigned grid_factor = 4) {
  const auto poles = s.finite_poles();
  const std::size_t m = std::max<std::size_t>(s.m(), 1);
  const std::size_t count = grid_factor * m * m;
  const long double pi = pi_value<long double>();
  AxisSpec best;
  best.base = center;
  Rational best_val = -2;
  for (std::size_t k = 0; k < count; ++k) {
    // theta in (-pi/2, pi/2]; k = count/2 - 1 gives theta = 0
    Rational frac = Rational(static_cast<long>(2 * (k + 1)) - static_cast<long>(count), static_cast<long>(2 * count));
    frac.canonicalize();
    AxisSpec axis;
    axis.base = center;
    axis.angle_over_pi = frac;
    axis.direction = frac == 0 ? GaussianRational(1) : pythagorean_direction(to_long_double(frac) * pi);
    Rational val = detail::mirror_objective(poles, axis);
    if (val < 0) val = 0;  // no pairs: any axis
    if (val > best_val) {
      best_val = val;
      best = axis;
    }
  }
  return best;
}

/// Minimal distance between poles and mirrors for an axis (squared, exact).
inline Rational mirror_distance2(const FuchsianSystem& s, const AxisSpec& axis) {
  return detail::mirror_objective(s.finite_poles(), axis);
}

struct SymmetrizedSystem {
  FuchsianSystem original;
  FuchsianSystem reflected;
  FuchsianSystem doubled;
  /// The doubled system in the axis chart, where reflection is conjugation.
  FuchsianSystem doubled_axis_chart;
  AxisSpec axis;
  CarpetValue carpet_original;
  CarpetValue carpet_doubled;
  /// log r_flat(doubled) / log r_flat(original) (upper estimate).
  long double nu_axis = 0;
};

namespace detail {

inline ExactMatrix block_diag(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  return m;
}

inline FuchsianSystem double_system(const FuchsianSystem& s, const FuchsianSystem& r) {
  FuchsianSystem d;
  d.n = 2 * s.n;
  const ExactMatrix zero(s.n, s.n);
  for (std::size_t j = 0; j < s.poles.size(); ++j) {
    d.poles.push_back(s.poles[j]);
    d.residues.push_back(block_diag(s.residues[j], zero));
  }
  for (std::size_t j = 0; j < r.poles.size(); ++j) {
    bool merged = false;
    for (std::size_t i = 0; i < s.poles.size(); ++i)
      if (d.poles[i] == r.poles[j]) {
        d.residues[i] = block_diag(s.residues[i], r.residues[j]);
        merged = true;
        break;
      }
    if (!merged) {
      d.poles.push_back(r.poles[j]);
      d.residues.push_back(block_diag(zero, r.residues[j]));
    }
  }
  // drop poles whose doubled residue vanishes
  FuchsianSystem out;
  out.n = d.n;
  for (std::size_t j = 0; j < d.poles.size(); ++j)
    if (!d.residues[j].is_zero()) {
      out.poles.push_back(d.poles[j]);
      out.residues.push_back(d.residues[j]);
    }
  if (out.poles.empty()) return d;
  return out;
}

}  // namespace detail

inline SymmetrizedSystem symmetrize(const FuchsianSystem& s, const AxisSpec& axis) {
  validate(s);
  SymmetrizedSystem out;
  out.original = s;
  out.axis = axis;
  out.reflected = reflect(s, axis);
  out.doubled = detail::double_system(s, out.reflected);
  out.doubled_axis_chart = to_axis_chart(out.doubled, axis);
  out.carpet_original = r_flat(s);
  out.carpet_doubled = r_flat(out.doubled);
  long double lo = std::log(to_long_double(out.carpet_original.lo));
  long double hi = std::log(to_long_double(out.carpet_doubled.hi));
  out.nu_axis = hi / lo;
  return out;
}

/// Combination (c, conj(c)) of the doubled system.
inline std::vector<GaussianRational> doubled_combination(const std::vector<GaussianRational>& c) {
  std::vector<GaussianRational> out = c;
  for (const auto& x : c) out.push_back(x.conj());
  return out;
}

}  // namespace oscillate

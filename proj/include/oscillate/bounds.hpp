// Zero bounds: lower bounds of polynomials away from their roots, variation
// of argument along arcs and small circles, the annulus count, the slit
// plan of the pole disk, and assembly of the certificate.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "numerics.hpp"
#include "reduction.hpp"
#include "roots.hpp"
#include "symmetrization.hpp"
#include "system.hpp"

namespace oscillate {

/// Every implementer-chosen constant of the bound pipeline.
struct BoundConstants {
  Rational c_vp = 4;
  unsigned nu_c = 4;
  unsigned clearance_factor = 4;  // ceil(4 d) + 1 candidates per thick slit
  unsigned axis_grid = 4;         // 4 m^2 symmetry-axis candidates
  unsigned chart_grid = 64;       // chart-infinity candidates per pole
  Rational disk_min = Rational(1, 4);
  Rational disk_max = Rational(7, 16);
  Rational slit_halfwidth = Rational(1, 8);
  Rational double_carpet_c = 4;  // nu_axis <= C (n + m)
  unsigned bits = 64;
};

namespace detail {

inline const Rational kPiLo(333, 106);
inline const Rational kPiHi(355, 113);

inline Rational upper_of(long double x) {
  Rational q = rational_from_long_double(x);
  Rational eps(1, 1);
  eps /= Rational(Integer(1) << 50);
  Rational r = q >= 0 ? Rational(q * (1 + eps) + eps) : Rational(q * (1 - eps) + eps);
  return round_up(r, 64);
}

inline Rational lower_of(long double x) {
  Rational q = rational_from_long_double(x);
  Rational eps(1, 1);
  eps /= Rational(Integer(1) << 50);
  Rational r = q >= 0 ? Rational(q * (1 - eps) - eps) : Rational(q * (1 + eps) - eps);
  return round_down(r, 64);
}

/// Exact when small, otherwise rounded outward to 64 bits.
inline Rational tidy_up(const Rational& q) {
  return bit_length(q.get_num()) + bit_length(q.get_den()) <= 256 ? q : round_up(q, 64);
}
inline Rational tidy_down(const Rational& q) {
  return bit_length(q.get_num()) + bit_length(q.get_den()) <= 256 ? q : round_down(q, 64);
}

inline Integer ceil_of(const Rational& q) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

/// |s(j, l)|, unsigned Stirling numbers of the first kind.
inline std::vector<std::vector<Integer>> stirling_table(std::size_t k) {
  std::vector<std::vector<Integer>> s(k + 1, std::vector<Integer>(k + 1, 0));
  s[0][0] = 1;
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t l = 1; l <= j; ++l) s[j][l] = s[j - 1][l - 1] + Integer(static_cast<long>(j - 1)) * s[j - 1][l];
  return s;
}

/// Upper bound for sum_l |c_l| rho^l.
inline Rational sup_on_disk(const Poly& p, const Rational& rho) {
  Rational acc = 0, pw = 1;
  for (const auto& c : p.coeffs()) {
    acc += c.abs().hi * pw;
    pw = tidy_up(pw * rho);
  }
  return tidy_up(acc);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lower bounds away from zeros

struct LowerBoundData {
  Rational bound = 0;
  Rational r = 0;
  Rational R = 0;
  long degree = 0;
  unsigned d_minus = 0;
  unsigned d_plus = 0;
  unsigned d_ambiguous = 0;
};

/// ||p||/(d+1) * f_-^{d_-} (3/8)^{d_+}, valid at every t with |t| <= R and
/// dist(t, roots) >= r.  Inside factor f_- = min(r/(2R+1), 3/8); roots whose
/// side of |z| = 2R is undecided get the inside factor.
inline LowerBoundData lower_bound_uniform(const Poly& p, const std::vector<RootDisk>& roots, const Rational& R,
                                          const Rational& r, unsigned bits = kDefaultSqrtBits) {
  if (p.is_zero()) throw Error(ErrorCode::AllZero, "lower bound of the zero polynomial");
  LowerBoundData out;
  out.r = r;
  out.R = R;
  out.degree = p.degree();
  if (r <= 0 && p.degree() > 0) return out;
  const Rational two_r = 2 * R;
  for (const auto& d : roots) {
    switch (classify(d, two_r)) {
      case DiskSide::Inside: out.d_minus += d.multiplicity; break;
      case DiskSide::Outside: out.d_plus += d.multiplicity; break;
      case DiskSide::Ambiguous: out.d_ambiguous += d.multiplicity; break;
    }
  }
  Rational inside = std::min(Rational(r / (2 * R + 1)), Rational(3, 8));
  Rational b = poly_norm(p, bits).lo / Rational(p.degree() + 1);
  b *= pow(inside, out.d_minus + out.d_ambiguous);
  b *= pow(Rational(3, 8), out.d_plus);
  out.bound = detail::tidy_down(b);
  return out;
}

/// Lower bound for |p(t)| with |t| <= R, R >= 2.
inline LowerBoundData lower_bound_away_from_zeros(const Poly& p, const GaussianRational& t, const Rational& R) {
  if (R < 2) throw Error(ErrorCode::InvalidArgument, "lower bound needs R >= 2");
  if (t.norm2() > R * R) throw Error(ErrorCode::InvalidArgument, "point outside the disk of radius R");
  if (p.is_zero() || p.eval(t).is_zero()) throw Error(ErrorCode::OnZeroLocus, "p vanishes at t");
  auto roots = isolate_roots(p);
  Rational r = root_distance_lower(roots, t);
  if (r == 0 && p.degree() > 0) {
    roots = isolate_roots(p, pow(Rational(1, 2), 96));
    r = root_distance_lower(roots, t);
  }
  if (p.degree() == 0) r = 1;
  return lower_bound_uniform(p, roots, R, r);
}

// ---------------------------------------------------------------------------
// Variation of argument

struct PreparedOperator {
  ScalarOperator op;
  std::vector<RootDisk> v;  // zeros of a_0
  Enclosure a0_norm;
  Enclosure slope;
};

inline PreparedOperator prepare(const ScalarOperator& op, unsigned bits = kDefaultSqrtBits) {
  PreparedOperator p;
  p.op = op;
  p.v = isolate_roots(op.a.front(), pow(Rational(1, 2), 40));
  p.a0_norm = poly_norm(op.a.front(), bits);
  p.slope = slope(op, bits);
  return p;
}

struct VarArgBound {
  std::string kind;  // segment | arc | circle | small-circle
  ArcSpec arc;
  Rational bound = 0;
  std::size_t k = 0;
  Enclosure slope;
  Rational length = 0;
  Rational clearance = 0;
  Rational R = 0;
  long d = 0;
  Rational A = 0;
  Rational lower_a0 = 0;
  std::vector<Rational> beta;  // beta_1..beta_k
};

/// Certified lower bound for the distance from an arc to a set of disks.
inline Rational arc_clearance(const ArcSpec& arc, const std::vector<RootDisk>& roots) {
  Rational best = -1;
  for (const auto& d : roots) {
    Complex c = d.approx();
    long double dist = arc.distance_to(c);
    long double slack = 1e-15L * (1 + c.abs() + arc.max_modulus());
    Rational lo = detail::lower_of(dist - slack) - d.radius;
    if (best < 0 || lo < best) best = lo;
  }
  if (best < 0 && roots.empty()) return Rational(1000000);
  return std::max(best, Rational(0));
}

namespace detail {

/// A and B from bounds beta_1..beta_k of the monic coefficients of y^(k-j)
/// in the t-variable.  For circular arcs of radius rho the equation is first
/// rewritten in the arc-length variable.
inline void finish_var_arg(VarArgBound& out, const std::vector<Rational>& beta, bool circular, const Rational& rho_lo,
                           const Rational& c_vp) {
  const std::size_t k = out.k;
  Rational A = 0;
  if (!circular) {
    for (const auto& b : beta) A = std::max(A, b);
  } else {
    auto st = stirling_table(k);
    for (std::size_t l = 0; l < k; ++l) {
      Rational sum = 0;
      for (std::size_t j = l; j <= k; ++j) {
        Rational bj = j == k ? Rational(1) : beta[k - j - 1];
        if (st[j][l] == 0 || bj == 0) continue;
        // rho^(l - j) <= rho_lo^(l - j) for j >= l
        sum += bj * Rational(st[j][l]) / pow(rho_lo, j - l);
      }
      A = std::max(A, tidy_up(sum));
    }
  }
  out.A = A;
  if (k == 0) {
    out.bound = 0;
  } else if (k == 1) {
    out.bound = tidy_up(c_vp * out.length * A);
  } else {
    out.bound = tidy_up(c_vp * Rational(static_cast<long>(k)) * (out.length * std::max(A, Rational(1)) + 1));
  }
}

}  // namespace detail

/// Var Arg bound for any solution along a segment or circular arc inside
/// the disk of radius R, away from the zeros of a_0.
inline VarArgBound var_arg_bound_arc(const PreparedOperator& pop, const ArcSpec& arc, const Rational& R,
                                     const BoundConstants& kc = {}, std::optional<Rational> r = std::nullopt) {
  const ScalarOperator& op = pop.op;
  VarArgBound out;
  out.arc = arc;
  out.kind = arc.kind == ArcSpec::Kind::Segment ? "segment" : (arc.kind == ArcSpec::Kind::Circle ? "circle" : "arc");
  out.k = op.order;
  out.slope = pop.slope;
  out.d = op.degree_bound();
  Rational rc = arc_clearance(arc, pop.v);
  if (rc <= 0) throw Error(ErrorCode::ArcTooClose, "arc clearance from the zeros of a_0 not certified");
  if (r) {
    if (*r > rc || *r <= 0) throw Error(ErrorCode::ArcTooClose, "requested clearance exceeds the certified one");
    rc = *r;
  }
  out.clearance = rc;
  out.length = detail::upper_of(arc.length());
  Rational Rs = detail::upper_of(arc.max_modulus());
  Rational Rl = std::max({R, Rational(2), Rational(detail::ceil_of(Rs))});
  out.R = Rl;
  auto lb = lower_bound_uniform(op.a.front(), pop.v, Rl, rc, kc.bits);
  if (lb.bound <= 0) throw Error(ErrorCode::ArcTooClose, "no positive lower bound for a_0 on the arc");
  out.lower_a0 = lb.bound;
  std::vector<Rational> beta;
  for (std::size_t j = 1; j <= op.order; ++j) beta.push_back(detail::tidy_up(detail::sup_on_disk(op.a[j], Rs) / lb.bound));
  out.beta = beta;
  bool circular = arc.kind != ArcSpec::Kind::Segment;
  detail::finish_var_arg(out, beta, circular, circular ? detail::lower_of(arc.radius) : Rational(1), kc.c_vp);
  return out;
}

/// Local Fuchsian form at a point: q_j = b_j u^(j - e), b_j(u) = a_j(pole + u),
/// e = ord_0 b_0.
inline std::vector<Poly> local_fuchsian_form(const ScalarOperator& op, const GaussianRational& pole) {
  std::vector<Poly> b;
  for (const auto& a : op.a) b.push_back(a.taylor_shift(pole));
  const std::size_t e = b.front().valuation();
  std::vector<Poly> q;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j].is_zero()) {
      q.emplace_back();
      continue;
    }
    if (j >= e) {
      q.push_back(b[j].shift_up(j - e));
    } else {
      if (b[j].valuation() < e - j)
        throw Error(ErrorCode::NotFuchsianLocal, "coefficient " + std::to_string(j) + " has a pole of order above " +
                                                     std::to_string(j) + " at the point");
      q.push_back(b[j].shift_down(e - j));
    }
  }
  return q;
}

/// Var Arg bound along |t - pole| = rho valid for every rho <= rho_max.
inline VarArgBound var_arg_bound_small_circle(const ScalarOperator& op, const GaussianRational& pole,
                                              const BoundConstants& kc = {},
                                              std::optional<Rational> rho_max = std::nullopt) {
  auto q = local_fuchsian_form(op, pole);
  VarArgBound out;
  out.kind = "small-circle";
  out.k = op.order;
  out.slope = slope(op, kc.bits);
  out.d = op.degree_bound();
  auto roots = isolate_roots(q.front(), pow(Rational(1, 2), 40));
  Rational r = 1;
  bool have = false;
  for (const auto& d : roots) {
    Rational lo = sqrt_enclosure(d.center.norm2(), 48).lo - d.radius;
    if (!have || lo < r) r = lo;
    have = true;
  }
  if (!have) r = 1;
  if (r <= 0) throw Error(ErrorCode::ArcTooClose, "another zero of a_0 is not separated from the point");
  Rational rho = std::min(Rational(r / 2), Rational(1, 2));
  if (rho_max) {
    if (*rho_max <= 0 || *rho_max > rho) throw Error(ErrorCode::InvalidArgument, "rho_max beyond the local disk");
    rho = *rho_max;
  }
  out.clearance = r;
  out.R = 2;
  out.arc = ArcSpec::circle(to_complex(pole), to_long_double(rho));
  auto lb = lower_bound_uniform(q.front(), roots, Rational(2), r - rho, kc.bits);
  if (lb.bound <= 0) throw Error(ErrorCode::ArcTooClose, "no lower bound for the local leading coefficient");
  out.lower_a0 = lb.bound;
  std::vector<Rational> beta;
  for (std::size_t j = 1; j <= op.order; ++j)
    beta.push_back(detail::tidy_up(detail::sup_on_disk(q[j], rho) / lb.bound));
  out.beta = beta;
  out.length = 2 * detail::kPiHi;
  // unit circle in the rescaled variable
  detail::finish_var_arg(out, beta, true, Rational(1), kc.c_vp);
  return out;
}

// ---------------------------------------------------------------------------
// Annulus count

/// (2k + 1)(2 ceil(B) + 1).
inline Integer petrov_annulus_bound(std::size_t k, const Rational& B) {
  Integer b = detail::ceil_of(B);
  return Integer(static_cast<long>(2 * k + 1)) * (2 * b + 1);
}

inline bool is_real_operator(const ScalarOperator& op) {
  for (const auto& a : op.a)
    for (const auto& c : a.coeffs())
      if (!c.is_real()) return false;
  return true;
}

/// Annulus bound for a real operator whose monodromy along the equator has
/// certified unit-modulus eigenvalues.
inline Integer petrov_annulus_bound(const ScalarOperator& op, const MonodromyData& md, const VarArgBound& outer,
                                    const VarArgBound& inner) {
  if (!is_real_operator(op)) throw Error(ErrorCode::InvalidArgument, "operator is not real on the axis");
  if (!md.all_unit()) throw Error(ErrorCode::MonodromyNotUnitModulus, "monodromy eigenvalues not certified on |z| = 1");
  return petrov_annulus_bound(op.order, std::max(outer.bound, inner.bound));
}

// ---------------------------------------------------------------------------
// Slit plan

struct PoleDisk {
  std::size_t pole = 0;
  GaussianRational center;
  Rational radius;
  Rational clearance;
  /// Radius of the disk handled by the annulus count (== radius unless the
  /// symmetrized operator has further zeros of a_0 inside the disk).
  Rational inner_radius;
  long double ring_angle = 0;  // radial slit of the ring region
  bool has_ring = false;
};

struct Slit {
  std::size_t from = 0;
  long to = -1;  // pole disk index, or -1 for the outer circle
  Rational offset;
  Complex start, end;
  long double theta_from = 0;  // attachment angle on the lower disk
  long double theta_to = 0;    // attachment angle on the upper disk or outer circle
  Rational clearance;
  ArcSpec segment() const { return ArcSpec::segment(start, end); }
};

enum class RegionKind { Middle, Exterior, Ring, PuncturedDisk };

inline const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Middle: return "middle";
    case RegionKind::Exterior: return "exterior";
    case RegionKind::Ring: return "ring";
    case RegionKind::PuncturedDisk: return "punctured-disk";
  }
  return "?";
}

struct Region {
  RegionKind kind = RegionKind::Middle;
  long disk = -1;
  /// Positively oriented boundary (for the numeric count).
  ComplexPath boundary;
};

struct SlitPlan {
  Rational R;
  Rational R_out;
  std::vector<PoleDisk> disks;
  std::vector<Slit> slits;
  std::vector<Region> regions;
  Rational clearance;
  long double total_slit_length = 0;
  unsigned candidates = 0;
};

namespace detail {

inline long double circle_clearance(const Complex& c, long double rho, const std::vector<RootDisk>& roots,
                                    const Complex* skip = nullptr) {
  long double best = 1e300L;
  for (const auto& d : roots) {
    Complex z = d.approx();
    if (skip && (z - *skip).abs() < 1e-30L && d.radius == 0) continue;
    long double v = std::fabs((z - c).abs() - rho) - to_long_double(d.radius);
    best = std::min(best, v);
  }
  return best;
}

inline long double segment_clearance(const ArcSpec& seg, const std::vector<RootDisk>& roots) {
  long double best = 1e300L;
  for (const auto& d : roots) best = std::min(best, seg.distance_to(d.approx()) - to_long_double(d.radius));
  return best;
}

/// Boundary of an annulus a <= |t - c| <= b cut along the ray at angle psi.
inline ComplexPath slit_annulus(const Complex& c, long double a, long double b, long double psi) {
  const long double two_pi = 2 * pi_value<long double>();
  ComplexPath p;
  p.push_back(ArcSpec::arc(c, b, psi, psi + two_pi));
  p.push_back(ArcSpec::segment(c + Complex::polar(b, psi), c + Complex::polar(a, psi)));
  p.push_back(ArcSpec::arc(c, a, psi, psi - two_pi));
  p.push_back(ArcSpec::segment(c + Complex::polar(a, psi), c + Complex::polar(b, psi)));
  return p;
}

}  // namespace detail

/// Thick-slit plan of the disk |t| <= R around the poles.  `extra` holds, per
/// pole, further points the pole circles must avoid (zeros of the leading
/// coefficient of the symmetrized operator, in the same chart).
/// `perturbation` > 0 shifts every candidate grid by a fraction 2^-perturbation
/// of its spacing.
inline SlitPlan build_slit_plan(const PreparedOperator& pop, const std::vector<GaussianRational>& poles,
                                const Rational& R, const std::vector<std::vector<RootDisk>>& extra = {},
                                const BoundConstants& kc = {}, unsigned perturbation = 0) {
  SlitPlan plan;
  plan.R = R;
  const auto& V = pop.v;
  const long d = std::max<long>(pop.op.a.front().degree(), 1);
  const unsigned N = static_cast<unsigned>(kc.clearance_factor * static_cast<unsigned long>(d)) + 1;
  plan.candidates = N;
  const Rational shift = perturbation == 0 ? Rational(0) : Rational(1, 2) / Rational(Integer(1) << perturbation);
  auto grid = [&](const Rational& lo, const Rational& hi, unsigned i) -> Rational {
    Rational step = (hi - lo) / Rational(static_cast<long>(N));
    return lo + step * (Rational(static_cast<long>(i)) + shift);
  };
  // pole disks
  for (std::size_t j = 0; j < poles.size(); ++j) {
    PoleDisk disk;
    disk.pole = j;
    disk.center = poles[j];
    Complex c = to_complex(poles[j]);
    std::vector<RootDisk> avoid = V;
    if (j < extra.size()) avoid.insert(avoid.end(), extra[j].begin(), extra[j].end());
    long double best = -1e300L;
    for (unsigned i = 0; i <= N; ++i) {
      Rational rho = grid(kc.disk_min, kc.disk_max, i);
      if (rho > kc.disk_max) continue;
      long double cl = detail::circle_clearance(c, to_long_double(rho), avoid);
      if (cl > best) {
        best = cl;
        disk.radius = rho;
      }
    }
    disk.clearance = detail::lower_of(best);
    disk.inner_radius = disk.radius;
    // zeros of the symmetrized leading coefficient inside the disk
    if (j < extra.size()) {
      long double inner = 1e300L;
      for (const auto& e : extra[j]) {
        long double dist = (e.approx() - c).abs() - to_long_double(e.radius);
        if ((e.approx() - c).abs() < 1e-30L && e.radius == 0) continue;
        if (dist < to_long_double(disk.radius) + 1e-9L) inner = std::min(inner, dist);
      }
      if (inner < 1e300L) {
        disk.has_ring = true;
        Rational lim = detail::lower_of(inner);
        long double best_in = -1e300L;
        for (unsigned i = 0; i <= N; ++i) {
          Rational rho = grid(lim / 4, lim / 2, i);
          if (rho > lim / 2 || rho <= 0) continue;
          long double cl = detail::circle_clearance(c, to_long_double(rho), avoid);
          if (cl > best_in) {
            best_in = cl;
            disk.inner_radius = rho;
          }
        }
        // radial slit of the ring, pointing downwards within +-pi/4
        const long double pi = pi_value<long double>();
        long double best_ang = -1e300L;
        for (unsigned i = 0; i <= N; ++i) {
          long double psi = -pi / 2 - pi / 4 + (pi / 2) * (static_cast<long double>(i) + to_long_double(shift)) / N;
          ArcSpec seg = ArcSpec::segment(c + Complex::polar(to_long_double(disk.inner_radius), psi),
                                         c + Complex::polar(to_long_double(disk.radius), psi));
          long double cl = detail::segment_clearance(seg, V);
          if (cl > best_ang) {
            best_ang = cl;
            disk.ring_angle = psi;
          }
        }
      }
    }
    plan.disks.push_back(disk);
  }
  // outer circle
  {
    long double best = -1e300L;
    for (unsigned i = 0; i <= N; ++i) {
      Rational rho = grid(R - Rational(1, 2), R, i);
      if (rho > R) continue;
      long double cl = detail::circle_clearance(Complex(0), to_long_double(rho), V);
      if (cl > best) {
        best = cl;
        plan.R_out = rho;
      }
    }
  }
  const long double R_out = to_long_double(plan.R_out);
  // vertical slits from the top of each disk to the first obstacle above
  for (std::size_t j = 0; j < plan.disks.size(); ++j) {
    const PoleDisk& dj = plan.disks[j];
    Complex c = to_complex(dj.center);
    long double rho = to_long_double(dj.radius);
    long double best = -1e300L;
    Slit chosen;
    for (unsigned i = 0; i <= N; ++i) {
      Rational off = grid(-kc.slit_halfwidth, kc.slit_halfwidth, i);
      if (off > kc.slit_halfwidth) continue;
      long double dx = to_long_double(off);
      Slit s;
      s.from = j;
      s.offset = off;
      s.start = Complex(c.re + dx, c.im + std::sqrt(rho * rho - dx * dx));
      long double x = s.start.re;
      long double y_end = std::sqrt(R_out * R_out - x * x);
      long to = -1;
      long double gap = 1e300L;
      for (std::size_t i2 = 0; i2 < plan.disks.size(); ++i2) {
        if (i2 == j) continue;
        Complex ci = to_complex(plan.disks[i2].center);
        long double ri = to_long_double(plan.disks[i2].radius);
        if (ci.im + ri <= s.start.im) continue;
        long double ddx = std::fabs(x - ci.re);
        gap = std::min(gap, std::fabs(ddx - ri));
        if (ddx < ri) {
          long double y_hit = ci.im - std::sqrt(ri * ri - ddx * ddx);
          if (y_hit > s.start.im && y_hit < y_end) {
            y_end = y_hit;
            to = static_cast<long>(i2);
          }
        }
      }
      s.to = to;
      s.end = Complex(x, y_end);
      s.theta_from = std::atan2(s.start.im - c.im, s.start.re - c.re);
      if (to < 0) {
        s.theta_to = std::atan2(y_end, x);
      } else {
        Complex ct = to_complex(plan.disks[static_cast<std::size_t>(to)].center);
        s.theta_to = std::atan2(y_end - ct.im, x - ct.re);
      }
      long double cl = detail::segment_clearance(s.segment(), V);
      long double score = std::min(cl, gap);
      s.clearance = detail::lower_of(cl);
      if (score > best) {
        best = score;
        chosen = s;
      }
    }
    plan.slits.push_back(chosen);
    plan.total_slit_length += chosen.segment().length();
  }
  // regions
  const long double pi = pi_value<long double>();
  const long double two_pi = 2 * pi;
  {
    Region mid;
    mid.kind = RegionKind::Middle;
    std::function<void(std::size_t)> descend;
    auto circle_disk = [&](std::size_t j, long double thetaA) {
      const PoleDisk& dj = plan.disks[j];
      Complex c = to_complex(dj.center);
      long double rho = to_long_double(dj.radius);
      std::vector<std::pair<long double, std::size_t>> kids;
      for (std::size_t s = 0; s < plan.slits.size(); ++s)
        if (plan.slits[s].to == static_cast<long>(j)) {
          long double th = plan.slits[s].theta_to;
          while (th >= thetaA) th -= two_pi;
          while (th < thetaA - two_pi) th += two_pi;
          kids.emplace_back(th, s);
        }
      std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      long double a = thetaA;
      for (const auto& [th, s] : kids) {
        mid.boundary.push_back(ArcSpec::arc(c, rho, a, th));
        descend(s);
        a = th;
      }
      mid.boundary.push_back(ArcSpec::arc(c, rho, a, thetaA - two_pi));
    };
    descend = [&](std::size_t s) {
      const Slit& sl = plan.slits[s];
      mid.boundary.push_back(ArcSpec::segment(sl.end, sl.start));
      circle_disk(sl.from, sl.theta_from);
      mid.boundary.push_back(ArcSpec::segment(sl.start, sl.end));
    };
    std::vector<std::pair<long double, std::size_t>> tops;
    for (std::size_t s = 0; s < plan.slits.size(); ++s)
      if (plan.slits[s].to < 0) {
        long double th = plan.slits[s].theta_to;
        if (th < -pi / 2) th += two_pi;
        tops.emplace_back(th, s);
      }
    std::sort(tops.begin(), tops.end());
    long double a = -pi / 2;
    for (const auto& [th, s] : tops) {
      mid.boundary.push_back(ArcSpec::arc(Complex(0), R_out, a, th));
      descend(s);
      a = th;
    }
    mid.boundary.push_back(ArcSpec::arc(Complex(0), R_out, a, 3 * pi / 2));
    plan.regions.push_back(std::move(mid));
  }
  {
    Region ext;
    ext.kind = RegionKind::Exterior;
    ext.boundary.push_back(ArcSpec::circle(Complex(0), R_out, false, -pi / 2));
    plan.regions.push_back(std::move(ext));
  }
  for (std::size_t j = 0; j < plan.disks.size(); ++j) {
    const PoleDisk& dj = plan.disks[j];
    Complex c = to_complex(dj.center);
    if (dj.has_ring) {
      Region ring;
      ring.kind = RegionKind::Ring;
      ring.disk = static_cast<long>(j);
      ring.boundary =
          detail::slit_annulus(c, to_long_double(dj.inner_radius), to_long_double(dj.radius), dj.ring_angle);
      plan.regions.push_back(std::move(ring));
      plan.total_slit_length += to_long_double(dj.radius - dj.inner_radius) + two_pi * to_long_double(dj.inner_radius);
    }
    Region pd;
    pd.kind = RegionKind::PuncturedDisk;
    pd.disk = static_cast<long>(j);
    long double outer = to_long_double(dj.inner_radius);
    pd.boundary = detail::slit_annulus(c, outer / 64, outer, -pi / 2);
    plan.regions.push_back(std::move(pd));
    plan.total_slit_length += two_pi * to_long_double(dj.radius);
  }
  plan.total_slit_length += two_pi * R_out;
  // overall clearance from V
  Rational cl = -1;
  auto take = [&](const Rational& v) {
    if (cl < 0 || v < cl) cl = v;
  };
  for (const auto& s : plan.slits) take(arc_clearance(s.segment(), V));
  for (const auto& dj : plan.disks) {
    take(arc_clearance(ArcSpec::circle(to_complex(dj.center), to_long_double(dj.radius)), V));
    if (dj.has_ring) take(arc_clearance(ArcSpec::circle(to_complex(dj.center), to_long_double(dj.inner_radius)), V));
  }
  take(arc_clearance(ArcSpec::circle(Complex(0), R_out), V));
  plan.clearance = std::max(cl, Rational(0));
  return plan;
}

// ---------------------------------------------------------------------------
// Assembly

struct PoleSymmetry {
  std::size_t disk = 0;
  AxisSpec axis;
  ScalarOperator op;  // symmetrized operator in the axis chart
  bool real_on_axis = false;
  long double nu_axis = 0;
  bool carpet_control = false;
  Rational mirror_distance2 = 0;
  std::vector<RootDisk> v_axis_chart;
  std::vector<RootDisk> v_chart;  // the same zeros in the normalized chart
  VarArgBound outer, inner;
  std::vector<EigenEnclosure> eigenvalues;
  bool monodromy_unit = false;
};

struct RegionBound {
  std::size_t region = 0;
  RegionKind kind = RegionKind::Middle;
  long disk = -1;
  Integer bound = 0;
  Rational var_arg_sum = 0;
  std::vector<std::size_t> arc_bounds;  // indices into BoundCertificate::arc_bounds
  std::size_t order = 0;                // annulus count: operator order
  Rational B = 0;                       // annulus count: max variation
};

struct BoundCertificate {
  FuchsianSystem input;
  std::vector<GaussianRational> combination;
  NormalizedChart chart;
  FuchsianSystem normalized;
  ScalarOperator op;
  std::size_t order = 0;
  bool degenerate = false;
  Enclosure slope;
  std::vector<RootDisk> v;
  SlitPlan plan;
  std::vector<VarArgBound> arc_bounds;
  std::vector<RegionBound> regions;
  std::vector<PoleSymmetry> symmetries;
  Integer total = 0;
  Rational log2_total = 0;  // upper bound
  CarpetValue carpet;
  Rational nu = 0;
  bool closed_form_holds = false;
  bool slope_bound_holds = false;
  BoundConstants constants;
  unsigned perturbation = 0;
};

class SpectralClassError : public Error {
 public:
  SpectralClassError(std::size_t index, const std::string& what)
      : Error(ErrorCode::SpectralClassViolation, what), index_(index) {}
  std::size_t residue_index() const { return index_; }

 private:
  std::size_t index_;
};

namespace detail {

inline Rational log2_upper(const Integer& z) {
  if (z <= 1) return 0;
  // log2 z <= bits(z - 1) refined by the leading 53 bits
  std::size_t bits = bit_length(z);
  long double lead = 0;
  {
    Integer top = z;
    long shift = static_cast<long>(bits) - 60;
    if (shift > 0) top >>= static_cast<mp_bitcnt_t>(shift);
    lead = std::log2(static_cast<long double>(top.get_d())) + (shift > 0 ? static_cast<long double>(shift) : 0);
  }
  return upper_of(lead + 1e-12L);
}

inline std::vector<RootDisk> map_disks(const std::vector<RootDisk>& in, const AxisSpec& axis) {
  std::vector<RootDisk> out;
  for (const auto& d : in) out.push_back({axis.from_axis_chart(d.center), d.radius, d.multiplicity});
  return out;
}

}  // namespace detail

inline BoundCertificate assemble_bound(const FuchsianSystem& s, const std::vector<GaussianRational>& combination,
                                       const BoundConstants& kc = {}, unsigned perturbation = 0) {
  validate(s);
  auto spec = spectral_class_check(s);
  if (!spec.in_class) {
    std::size_t idx = *spec.first_violation;
    throw SpectralClassError(idx, "residue " + std::to_string(idx) + " has non-real spectrum");
  }
  BoundCertificate cert;
  cert.input = s;
  cert.combination = combination;
  cert.constants = kc;
  cert.perturbation = perturbation;
  auto [chart, ns] = normalize_chart(s);
  cert.chart = chart;
  cert.normalized = ns;
  auto [op, trace] = derive_scalar(ns, combination);
  cert.op = op;
  cert.order = op.order;
  cert.degenerate = trace.degenerate;
  PreparedOperator pop = prepare(op, kc.bits);
  cert.slope = pop.slope;
  cert.v = pop.v;
  const auto poles = ns.finite_poles();
  const Rational R = chart.R_bound;

  // symmetrized operators around each pole
  std::vector<std::vector<RootDisk>> extra;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    PoleSymmetry ps;
    ps.disk = j;
    ps.axis = choose_axis(ns, poles[j], kc.axis_grid);
    ps.mirror_distance2 = mirror_distance2(ns, ps.axis);
    auto sym = symmetrize(ns, ps.axis);
    ps.nu_axis = sym.nu_axis;
    ps.carpet_control =
        ps.nu_axis <= to_long_double(kc.double_carpet_c) * static_cast<long double>(ns.n + ns.m());
    ReductionOptions ro;
    ro.full_gcd = true;
    ps.op = derive_scalar(sym.doubled_axis_chart, doubled_combination(combination), ro).first;
    ps.real_on_axis = is_real_operator(ps.op);
    ps.v_axis_chart = isolate_roots(ps.op.a.front(), pow(Rational(1, 2), 40));
    ps.v_chart = detail::map_disks(ps.v_axis_chart, ps.axis);
    extra.push_back(ps.v_chart);
    cert.symmetries.push_back(std::move(ps));
  }
  cert.plan = build_slit_plan(pop, poles, R, extra, kc, perturbation);
  const SlitPlan& plan = cert.plan;

  auto add_arc = [&](const ArcSpec& arc) {
    cert.arc_bounds.push_back(var_arg_bound_arc(pop, arc, R, kc));
    return cert.arc_bounds.size() - 1;
  };
  const Rational two_pi_lo = 2 * detail::kPiLo;
  for (std::size_t ri = 0; ri < plan.regions.size(); ++ri) {
    const Region& reg = plan.regions[ri];
    RegionBound rb;
    rb.region = ri;
    rb.kind = reg.kind;
    rb.disk = reg.disk;
    if (reg.kind == RegionKind::PuncturedDisk) {
      PoleSymmetry& ps = cert.symmetries[static_cast<std::size_t>(reg.disk)];
      const PoleDisk& dk = plan.disks[static_cast<std::size_t>(reg.disk)];
      PreparedOperator sp = prepare(ps.op, kc.bits);
      ArcSpec outer = ArcSpec::circle(Complex(0), to_long_double(dk.inner_radius));
      ps.outer = var_arg_bound_arc(sp, outer, Rational(2), kc);
      ps.inner = var_arg_bound_small_circle(ps.op, GaussianRational(0), kc);
      MonodromyData md = monodromy(ps.op, {outer});
      ps.eigenvalues = md.eigenvalues;
      ps.monodromy_unit = md.all_unit();
      try {
        rb.bound = petrov_annulus_bound(ps.op, md, ps.outer, ps.inner);
      } catch (const Error& e) {
        throw Error(ErrorCode::InternalInconsistency,
                    std::string("annulus count inapplicable in the spectral class: ") + e.what());
      }
      rb.order = ps.op.order;
      rb.B = std::max(ps.outer.bound, ps.inner.bound);
    } else {
      Rational sum = 0;
      for (const auto& arc : reg.boundary) {
        std::size_t idx = add_arc(arc);
        rb.arc_bounds.push_back(idx);
        sum += cert.arc_bounds[idx].bound;
      }
      rb.var_arg_sum = sum;
      rb.bound = detail::ceil_of(sum / two_pi_lo);
    }
    cert.regions.push_back(std::move(rb));
  }
  cert.total = 0;
  for (const auto& rb : cert.regions) cert.total += rb.bound;
  cert.log2_total = detail::log2_upper(cert.total);
  cert.carpet = r_flat(s);
  cert.nu = nu_default(s.n, s.m(), kc.nu_c);
  // total <= R^nu  <=>  log2 total <= nu log2 R
  {
    long double l2r = std::log2(to_long_double(cert.carpet.lo)) * (1 - 1e-15L);
    Rational rhs = detail::lower_of(l2r) * cert.nu;
    cert.closed_form_holds = cert.log2_total <= rhs;
  }
  cert.slope_bound_holds = verify_slope_bound(op, cert.carpet, cert.nu);
  return cert;
}

}  // namespace oscillate

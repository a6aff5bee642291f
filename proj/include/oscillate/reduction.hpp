// Chart normalization and elimination of a Fuchsian system to a scalar
// linear differential operator annihilating a chosen combination of the
// solution components.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "complex.hpp"
#include "exact.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "system.hpp"

namespace oscillate {

// ---------------------------------------------------------------------------
// Chart normalization

struct NormalizedChart {
  /// z -> (a z + b)/(c z + d), row-major [[a, b], [c, d]].
  ExactMatrix moebius = ExactMatrix::identity(2);
  GaussianRational scale = GaussianRational(1);
  std::vector<GaussianRational> normalized_poles;
  Rational R_bound = 2;
  /// Point sent to infinity by the chart (absent for affine charts).
  bool has_chart_infinity = false;
  GaussianRational chart_infinity;
  /// Lower bound for the minimal pairwise distance of normalized poles.
  Rational min_distance = 0;
  bool identity() const { return moebius == ExactMatrix::identity(2) && scale == GaussianRational(1); }

  /// Image of a point of the sphere in the normalized chart (finite unless
  /// the point is the chart infinity).
  SpherePoint apply(const SpherePoint& z) const {
    const auto& a = moebius(0, 0);
    const auto& b = moebius(0, 1);
    const auto& c = moebius(1, 0);
    const auto& d = moebius(1, 1);
    if (z.infinite) {
      if (c.is_zero()) return SpherePoint::infinity();
      return SpherePoint(scale * (a / c));
    }
    GaussianRational den = c * z.value + d;
    if (den.is_zero()) return SpherePoint::infinity();
    return SpherePoint(scale * ((a * z.value + b) / den));
  }
};

namespace detail {

inline Rational min_pairwise_distance2(const std::vector<GaussianRational>& pts) {
  Rational best = -1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Rational d2 = (pts[i] - pts[j]).norm2();
      if (best < 0 || d2 < best) best = d2;
    }
  return best;
}

inline Rational norm_upper(const GaussianRational& z) { return sqrt_enclosure(z.norm2(), 48).hi; }

/// Candidate chart-infinity points: a Fibonacci grid on the sphere, mapped
/// to the plane by stereographic projection and snapped to dyadics.
inline std::vector<GaussianRational> fibonacci_candidates(std::size_t count) {
  std::vector<GaussianRational> out;
  const long double golden = 3.88322207745093315583L;  // pi (3 - sqrt 5)
  for (std::size_t k = 0; k < count; ++k) {
    long double zc = 1.0L - (2.0L * static_cast<long double>(k) + 1.0L) / static_cast<long double>(count);
    long double rho = std::sqrt(std::max(0.0L, 1.0L - zc * zc));
    long double phi = golden * static_cast<long double>(k);
    long double denom = 1.0L - zc;  // projection from the north pole
    if (denom < 1e-6L) continue;
    Complex w{rho * std::cos(phi) / denom, rho * std::sin(phi) / denom};
    out.push_back(snap(w, 6));
  }
  return out;
}

}  // namespace detail

/// Moves the system to an affine chart in which all poles are finite,
/// pairwise at distance >= 1 and bounded by R_bound.
inline std::pair<NormalizedChart, FuchsianSystem> normalize_chart(const FuchsianSystem& s) {
  validate(s);
  NormalizedChart chart;
  std::vector<GaussianRational> pts;
  if (!s.has_infinity()) {
    pts = s.finite_poles();
  } else {
    const std::size_t count = 64 * std::max<std::size_t>(s.m(), 1);
    auto candidates = detail::fibonacci_candidates(count);
    GaussianRational best;
    Rational best_d2 = -1;
    for (const auto& p : candidates) {
      Rational worst = -1;
      bool is_pole = false;
      for (const auto& tau : s.poles) {
        Rational d2 = chordal_distance2(SpherePoint(p), tau);
        if (d2 == 0) is_pole = true;
        if (worst < 0 || d2 < worst) worst = d2;
      }
      if (is_pole) continue;
      if (worst > best_d2) {
        best_d2 = worst;
        best = p;
      }
    }
    chart.has_chart_infinity = true;
    chart.chart_infinity = best;
    // Rotation of the sphere: z -> (conj(p) z + 1)/(p - z).
    chart.moebius = ExactMatrix{{best.conj(), GaussianRational(1)}, {GaussianRational(-1), best}};
    chart.scale = GaussianRational(1);
    for (const auto& tau : s.poles) pts.push_back(chart.apply(tau).value);
  }
  if (pts.size() >= 2) {
    Rational d2 = detail::min_pairwise_distance2(pts);
    if (d2 < 1) {
      Enclosure inv = sqrt_enclosure(Rational(1) / d2, 48);
      Integer c;
      mpz_cdiv_q(c.get_mpz_t(), inv.hi.get_num_mpz_t(), inv.hi.get_den_mpz_t());
      chart.scale = GaussianRational(Rational(c));
      for (auto& p : pts) p = chart.scale * p;
    }
    chart.min_distance = sqrt_enclosure(detail::min_pairwise_distance2(pts), 48).lo;
  } else {
    chart.min_distance = 1;
  }
  Rational rmax = 0;
  for (const auto& p : pts) rmax = std::max(rmax, detail::norm_upper(p));
  Integer rb;
  Rational target = rmax + 1;
  mpz_cdiv_q(rb.get_mpz_t(), target.get_num_mpz_t(), target.get_den_mpz_t());
  chart.R_bound = std::max(Rational(2), Rational(rb));
  chart.normalized_poles = pts;
  FuchsianSystem out;
  out.n = s.n;
  for (std::size_t j = 0; j < s.poles.size(); ++j) out.poles.emplace_back(pts[j]);
  out.residues = s.residues;
  return {chart, out};
}

// ---------------------------------------------------------------------------
// Scalar operators

/// a_0 y^(k) + a_1 y^(k-1) + ... + a_k y.
struct ScalarOperator {
  std::size_t order = 0;
  std::vector<Poly> a;

  long degree_bound() const {
    long d = 0;
    for (const auto& p : a) d = std::max(d, p.degree());
    return d;
  }
  const Poly& leading() const { return a.front(); }
  /// Coefficient of y^(j).
  const Poly& coefficient_of_derivative(std::size_t j) const { return a[order - j]; }
};

inline std::string to_string(const ScalarOperator& op) {
  std::string out;
  for (std::size_t j = 0; j <= op.order; ++j) {
    if (op.a[j].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(op.a[j]) + ")";
    std::size_t der = op.order - j;
    out += der == 0 ? "*y" : "*y^(" + std::to_string(der) + ")";
  }
  return out;
}

/// max_{j>=1} ||a_j|| / ||a_0||.
inline Enclosure slope(const ScalarOperator& op, unsigned bits = kDefaultSqrtBits) {
  if (op.a.empty() || op.a.front().is_zero()) throw Error(ErrorCode::InvalidArgument, "slope needs a_0 != 0");
  Enclosure a0 = poly_norm(op.a.front(), bits);
  Enclosure best(Rational(0));
  for (std::size_t j = 1; j < op.a.size(); ++j) best = max(best, poly_norm(op.a[j], bits) / a0);
  return best;
}

/// Whether slope <= R^nu.  Exact for small rational exponents, otherwise by
/// a conservative logarithmic comparison.
inline bool verify_slope_bound(const ScalarOperator& op, const CarpetValue& carpet, const Rational& nu) {
  if (nu <= 0) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
  Enclosure s = slope(op);
  if (s.hi == 0) return true;
  const Integer& p = nu.get_num();
  const Integer& q = nu.get_den();
  if (p.fits_ulong_p() && q.fits_ulong_p() && p.get_ui() <= 256 && q.get_ui() <= 256) {
    // s^q <= R^p
    if (pow(s.hi, q.get_ui()) <= pow(carpet.lo, p.get_ui())) return true;
    if (pow(s.lo, q.get_ui()) > pow(carpet.hi, p.get_ui())) return false;
    return pow(s.mid(), q.get_ui()) <= pow(carpet.mid(), p.get_ui());
  }
  long double ls = std::log2(to_long_double(s.hi));
  long double lr = std::log2(to_long_double(carpet.lo));
  long double rhs = to_long_double(nu) * lr;
  return ls <= rhs * (1.0L - 1e-15L) || ls <= rhs - 1e-12L;
}

/// Default exponent 2^(c n^2 m).
inline Rational nu_default(std::size_t n, std::size_t m, unsigned c = 4) {
  Integer v = 1;
  v <<= static_cast<mp_bitcnt_t>(c * n * n * m);
  return Rational(v);
}

// ---------------------------------------------------------------------------
// Elimination

struct ReductionTrace {
  Poly Q;
  PolyMatrix P;
  /// alpha_k = Q^k xi_k, covectors of polynomials.
  std::vector<std::vector<Poly>> alpha;
  /// Maximal minors w_i (row i deleted) of the dependency matrix.
  std::vector<Poly> wedges;
  /// Columns used for the minors.
  std::vector<std::size_t> columns;
  /// Cramer ratios c_i = numerator/denominator: y^(k) = sum_i c_i y^(i).
  std::vector<std::pair<Poly, Poly>> cramer;
  bool degenerate = false;
  std::size_t order = 0;
  /// Integer scale mu:  mu Q and mu P have Gaussian-integer coefficients.
  Integer mu = 1;
  std::size_t max_alpha_bits = 0;
  std::size_t max_wedge_bits = 0;
  bool degree_bounds_hold = true;
  bool norm_steps_hold = true;

  /// xi_k as numerator/denominator.
  std::pair<std::vector<Poly>, Poly> xi(std::size_t k) const { return {alpha[k], pow(Q, k)}; }
};

namespace detail {

using IntRow = std::vector<IntPoly>;

inline IntRow alpha_step(const IntRow& a, std::size_t k, const IntPoly& q, const IntPoly& dq,
                         const std::vector<IntRow>& p) {
  const std::size_t n = a.size();
  IntRow out(n);
  const GaussianInteger kk(static_cast<long>(k));
  for (std::size_t j = 0; j < n; ++j) {
    IntPoly v = q * a[j].derivative();
    if (k != 0) v -= kk * (dq * a[j]);
    out[j] = std::move(v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (!p[i][j].is_zero()) out[j] += a[i] * p[i][j];
  }
  return out;
}

/// Determinant by fraction-free (Bareiss) elimination over Z[i][t].
inline IntPoly bareiss_det(std::vector<IntRow> m) {
  const std::size_t n = m.size();
  if (n == 0) return IntPoly(GaussianInteger(1));
  IntPoly prev(GaussianInteger(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return {};
      std::swap(m[r], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        IntPoly v = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = divexact(v, prev);
      }
      m[i][k] = IntPoly();
    }
    prev = m[k][k];
  }
  IntPoly d = m[n - 1][n - 1];
  return negate ? -d : d;
}

/// Rank of a matrix over Q(i), with the pivot columns.
inline std::size_t rank_with_pivots(std::vector<std::vector<GaussianRational>> m,
                                    std::vector<std::size_t>* pivots = nullptr) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    GaussianRational inv = GaussianRational(1) / m[rank][c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c].is_zero()) continue;
      GaussianRational f = m[r][c] * inv;
      for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  return rank;
}

inline GaussianRational eval_int(const IntPoly& p, const GaussianRational& t) { return to_rational(p).eval(t); }

inline Integer lcm_denominators(const Poly& p, Integer acc) {
  for (const auto& c : p.coeffs()) mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), denominator_lcm(c).get_mpz_t());
  return acc;
}

}  // namespace detail

struct ReductionOptions {
  /// Number of random evaluation points for the rank test.
  unsigned rank_points = 3;
  std::uint64_t seed = 0x5eed;
  /// Skip the full gcd and only remove integer content and common powers of
  /// the pole factors (used for large doubled systems).
  bool full_gcd = true;
};

/// Derives the scalar operator annihilating y = combination . x for every
/// solution x of dx = (P/Q) x dt (the system in its affine chart).
inline std::pair<ScalarOperator, ReductionTrace> derive_scalar(const FuchsianSystem& s,
                                                               const std::vector<GaussianRational>& combination,
                                                               const ReductionOptions& opt = {}) {
  const std::size_t n = s.n;
  if (combination.size() != n) throw Error(ErrorCode::InvalidArgument, "combination length differs from rank");
  if (std::all_of(combination.begin(), combination.end(), [](const GaussianRational& c) { return c.is_zero(); }))
    throw Error(ErrorCode::InvalidArgument, "combination is zero");

  ReductionTrace tr;
  tr.Q = pole_polynomial(s);
  tr.P = numerator_matrix(s);
  Integer mu = detail::lcm_denominators(tr.Q, 1);
  for (const auto& row : tr.P)
    for (const auto& e : row) mu = detail::lcm_denominators(e, mu);
  tr.mu = mu;
  const IntPoly q = scale_to_integer(tr.Q, mu);
  const IntPoly dq = q.derivative();
  std::vector<detail::IntRow> p(n, detail::IntRow(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i][j] = scale_to_integer(tr.P[i][j], mu);

  // beta_k = mu^k den alpha_k with den clearing the combination's denominators.
  Integer den = 1;
  for (const auto& c : combination) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), denominator_lcm(c).get_mpz_t());
  detail::IntRow beta0(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational re = combination[j].re * den, im = combination[j].im * den;
    beta0[j] = IntPoly(GaussianInteger(Integer(re.get_num()), Integer(im.get_num())));
  }

  std::vector<GaussianRational> points;
  {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long> dist(-97, 97);
    while (points.size() < opt.rank_points) {
      Rational re(dist(rng), 7), im(dist(rng), 11);
      re.canonicalize();
      im.canonicalize();
      GaussianRational t(re, im);
      if (!tr.Q.eval(t).is_zero()) points.push_back(t);
    }
  }

  std::vector<detail::IntRow> beta{beta0};
  const long m_deg = tr.Q.degree();
  auto values_at = [&](std::size_t upto, const GaussianRational& t) {
    std::vector<std::vector<GaussianRational>> rows;
    for (std::size_t k = 0; k <= upto; ++k) {
      std::vector<GaussianRational> r(n);
      for (std::size_t j = 0; j < n; ++j) r[j] = detail::eval_int(beta[k][j], t);
      rows.push_back(std::move(r));
    }
    return rows;
  };

  std::vector<std::size_t> columns;
  std::vector<IntPoly> minors;
  std::size_t order = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    beta.push_back(detail::alpha_step(beta.back(), k - 1, q, dq, p));
    bool independent = false;
    std::vector<std::size_t> piv;
    for (const auto& t : points) {
      std::vector<std::size_t> piv_t;
      auto rows = values_at(k, t);
      if (detail::rank_with_pivots(rows, nullptr) == k + 1) {
        independent = true;
        break;
      }
      if (piv.empty()) {
        rows.pop_back();
        if (detail::rank_with_pivots(rows, &piv_t) == k) piv = piv_t;
      }
    }
    if (independent || piv.size() != k) continue;
    // Candidate dependency among beta_0..beta_k via maximal minors on `piv`.
    std::vector<IntPoly> w(k + 1);
    for (std::size_t del = 0; del <= k; ++del) {
      std::vector<detail::IntRow> sub;
      for (std::size_t r = 0; r <= k; ++r) {
        if (r == del) continue;
        detail::IntRow row;
        for (std::size_t c : piv) row.push_back(beta[r][c]);
        sub.push_back(std::move(row));
      }
      w[del] = detail::bareiss_det(std::move(sub));
    }
    bool ok = !w[k].is_zero();
    for (std::size_t j = 0; j < n && ok; ++j) {
      IntPoly acc;
      for (std::size_t r = 0; r <= k; ++r) {
        IntPoly term = w[r] * beta[r][j];
        if (r % 2 == 0)
          acc += term;
        else
          acc -= term;
      }
      ok = acc.is_zero();
    }
    if (!ok) continue;
    columns = piv;
    minors = std::move(w);
    order = k;
    break;
  }
  if (order == 0) throw Error(ErrorCode::InternalInconsistency, "no dependency found among n+1 covectors");
  beta.resize(order + 1);

  tr.order = order;
  tr.degenerate = order < n;
  tr.columns = columns;
  Rational mu_pow = Rational(den);
  for (std::size_t k = 0; k <= order; ++k) {
    std::vector<Poly> row;
    for (const auto& e : beta[k]) {
      row.push_back(GaussianRational(Rational(1) / mu_pow) * to_rational(e));
      tr.max_alpha_bits = std::max(tr.max_alpha_bits, max_coeff_bits(e));
      if (e.degree() > static_cast<long>(k) * m_deg) tr.degree_bounds_hold = false;
    }
    tr.alpha.push_back(std::move(row));
    mu_pow *= Rational(mu);
  }
  for (const auto& w : minors) {
    tr.wedges.push_back(to_rational(w));
    tr.max_wedge_bits = std::max(tr.max_wedge_bits, max_coeff_bits(w));
  }
  {
    // ||alpha_{k+1}|| <= (||Q|| deg alpha_k + k deg Q ||Q|| + n max||P_ij||) ||alpha_k||
    Enclosure qn = poly_norm(tr.Q, 32);
    Enclosure pmax(Rational(0));
    for (const auto& row : tr.P)
      for (const auto& e : row) pmax = max(pmax, poly_norm(e, 32));
    for (std::size_t k = 0; k + 1 <= order; ++k) {
      Enclosure ak(Rational(0)), ak1(Rational(0));
      long dk = 0;
      for (const auto& e : tr.alpha[k]) {
        ak += poly_norm(e, 32);
        dk = std::max(dk, e.degree());
      }
      for (const auto& e : tr.alpha[k + 1]) ak1 += poly_norm(e, 32);
      Enclosure factor = Rational(std::max<long>(dk, 0)) * qn + Rational(static_cast<long>(k) * m_deg) * qn +
                         Rational(static_cast<long>(n)) * pmax;
      if (!(ak1.lo <= (factor * ak).hi)) tr.norm_steps_hold = false;
    }
  }

  // Operator: a_{k-i} = (-1)^i w_i Qint^i.
  std::vector<Poly> a(order + 1);
  {
    Poly qint = to_rational(q);
    Poly qpow(GaussianRational(1));
    for (std::size_t i = 0; i <= order; ++i) {
      Poly wi = to_rational(minors[i]);
      if (i % 2 == 1) wi = -wi;
      a[order - i] = wi * qpow;
      qpow *= qint;
    }
  }
  // Cramer: y^(k) = sum_i c_i y^(i) with c_i = -a_{k-i}/a_0.
  for (std::size_t i = 0; i < order; ++i) tr.cramer.emplace_back(-a[order - i], a[0]);

  // Normalization: divide by the gcd and make a_0 monic.
  if (opt.full_gcd) {
    Poly g = poly_gcd(a);
    if (g.degree() >= 1)
      for (auto& c : a) c = divide_exact(c, g);
  } else {
    // common powers of t - tau for each pole, then content
    for (const auto& tau : s.finite_poles()) {
      Poly lf = Poly::linear_factor(tau);
      for (;;) {
        bool all = std::all_of(a.begin(), a.end(), [&](const Poly& c) { return c.is_zero() || divides(lf, c); });
        if (!all) break;
        for (auto& c : a)
          if (!c.is_zero()) c = divide_exact(c, lf);
      }
    }
  }
  GaussianRational lead = a[0].leading();
  for (auto& c : a) c = (GaussianRational(1) / lead) * c;
  ScalarOperator op;
  op.order = order;
  op.a = std::move(a);
  return {op, tr};
}

}  // namespace oscillate

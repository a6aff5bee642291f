// Numerical oracle: Taylor transport of linear systems along complex paths,
// argument variation, argument-principle zero counts and monodromy.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "complex.hpp"
#include "matrix.hpp"
#include "reduction.hpp"
#include "roots.hpp"
#include "system.hpp"

namespace oscillate {

// ---------------------------------------------------------------------------
// Paths

struct ArcSpec {
  enum class Kind { Segment, Arc, Circle };
  Kind kind = Kind::Segment;
  Complex a, b;  // endpoints of a segment
  Complex center;
  long double radius = 0;
  long double theta0 = 0, theta1 = 0;  // arcs and circles, theta1 - theta0 signed

  static ArcSpec segment(Complex from, Complex to) {
    ArcSpec s;
    s.kind = Kind::Segment;
    s.a = from;
    s.b = to;
    return s;
  }
  static ArcSpec arc(Complex c, long double r, long double th0, long double th1) {
    ArcSpec s;
    s.kind = Kind::Arc;
    s.center = c;
    s.radius = r;
    s.theta0 = th0;
    s.theta1 = th1;
    return s;
  }
  static ArcSpec circle(Complex c, long double r, bool ccw = true, long double th0 = 0) {
    ArcSpec s = arc(c, r, th0, th0 + (ccw ? 2 : -2) * pi_value<long double>());
    s.kind = Kind::Circle;
    return s;
  }

  Complex point(long double u) const {
    if (kind == Kind::Segment) return a + u * (b - a);
    long double th = theta0 + u * (theta1 - theta0);
    return center + Complex::polar(radius, th);
  }
  /// The same point at working precision T; full circles close exactly.
  template <class T>
  Cplx<T> point_t(long double u) const {
    if (kind == Kind::Segment) return Cplx<T>::from(a) + Cplx<T>(T(u)) * (Cplx<T>::from(b) - Cplx<T>::from(a));
    T span = kind == Kind::Circle ? T(theta1 > theta0 ? 2 : -2) * pi_value<T>() : T(theta1) - T(theta0);
    return Cplx<T>::from(center) + Cplx<T>::polar(T(radius), T(theta0) + T(u) * span);
  }
  Complex start() const { return point(0); }
  Complex end() const { return point(1); }
  long double length() const {
    if (kind == Kind::Segment) return (b - a).abs();
    return radius * std::fabs(theta1 - theta0);
  }
  ArcSpec reversed() const {
    ArcSpec r = *this;
    if (kind == Kind::Segment) {
      std::swap(r.a, r.b);
    } else {
      std::swap(r.theta0, r.theta1);
    }
    return r;
  }
  /// Euclidean distance from z to the arc.
  long double distance_to(const Complex& z) const {
    if (kind == Kind::Segment) {
      Complex d = b - a;
      long double len2 = d.norm2();
      long double u = len2 > 0 ? ((z - a).re * d.re + (z - a).im * d.im) / len2 : 0;
      u = std::clamp(u, 0.0L, 1.0L);
      return (z - point(u)).abs();
    }
    Complex w = z - center;
    long double rz = w.abs();
    if (kind == Kind::Circle || std::fabs(theta1 - theta0) >= 2 * pi_value<long double>())
      return std::fabs(rz - radius);
    long double lo = std::min(theta0, theta1), hi = std::max(theta0, theta1);
    long double th = w.arg();
    const long double two_pi = 2 * pi_value<long double>();
    while (th < lo) th += two_pi;
    while (th > lo + two_pi) th -= two_pi;
    if (th <= hi) return std::fabs(rz - radius);
    return std::min((z - start()).abs(), (z - end()).abs());
  }
  /// Largest modulus |t| on the arc (upper bound).
  long double max_modulus() const {
    if (kind == Kind::Segment) return std::max(a.abs(), b.abs());
    return center.abs() + radius;
  }
};

using ComplexPath = std::vector<ArcSpec>;

inline long double path_length(const ComplexPath& p) {
  long double L = 0;
  for (const auto& s : p) L += s.length();
  return L;
}

// ---------------------------------------------------------------------------
// Fields: x' = A(t) x with A rational; expansion of A around a point.

template <class T>
using CMatrix = std::vector<Cplx<T>>;  // row-major dim x dim or dim x cols

template <class T>
struct SystemField {
  std::size_t dim = 0;
  std::vector<Cplx<T>> poles;
  std::vector<CMatrix<T>> residues;

  explicit SystemField(const FuchsianSystem& s) : dim(s.n) {
    for (std::size_t j = 0; j < s.poles.size(); ++j) {
      if (s.poles[j].infinite) continue;
      poles.push_back(Cplx<T>::from_exact(s.poles[j].value));
      CMatrix<T> m;
      for (const auto& e : s.residues[j].entries()) m.push_back(Cplx<T>::from_exact(e));
      residues.push_back(std::move(m));
    }
  }
  const std::vector<Cplx<T>>& singularities() const { return poles; }

  /// A(t0 + s) = sum_p A_p s^p for p < order.
  std::vector<CMatrix<T>> expand(const Cplx<T>& t0, std::size_t order) const {
    std::vector<CMatrix<T>> out(order, CMatrix<T>(dim * dim));
    for (std::size_t j = 0; j < poles.size(); ++j) {
      Cplx<T> inv = Cplx<T>(T(1)) / (t0 - poles[j]);
      // 1/(t0 - tau + s) = sum (-1)^p s^p inv^(p+1)
      Cplx<T> c = inv;
      for (std::size_t p = 0; p < order; ++p) {
        for (std::size_t e = 0; e < dim * dim; ++e) out[p][e] += c * residues[j][e];
        c = -(c * inv);
      }
    }
    return out;
  }
};

template <class T>
struct OperatorField {
  std::size_t dim = 0;
  std::vector<std::vector<Cplx<T>>> coeffs;  // a_0..a_k, lowest degree first
  std::vector<Cplx<T>> sing;

  explicit OperatorField(const ScalarOperator& op) : dim(op.order) {
    for (const auto& a : op.a) {
      std::vector<Cplx<T>> c;
      for (const auto& x : a.coeffs()) c.push_back(Cplx<T>::from_exact(x));
      coeffs.push_back(std::move(c));
    }
    for (const auto& d : isolate_roots(op.a.front(), pow(Rational(1, 2), 40)))
      sing.push_back(Cplx<T>::from_exact(d.center));
  }
  const std::vector<Cplx<T>>& singularities() const { return sing; }

  static std::vector<Cplx<T>> shifted(const std::vector<Cplx<T>>& c, const Cplx<T>& t0, std::size_t order) {
    std::vector<Cplx<T>> v = c;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) v[j - 1] += t0 * v[j];
    v.resize(std::max(order, n));
    return v;
  }

  std::vector<CMatrix<T>> expand(const Cplx<T>& t0, std::size_t order) const {
    // Companion of y^(k) = -(a_1 y^(k-1) + ... + a_k y)/a_0.
    const std::size_t k = dim;
    auto a0 = shifted(coeffs[0], t0, order);
    std::vector<CMatrix<T>> out(order, CMatrix<T>(k * k));
    for (std::size_t r = 0; r + 1 < k; ++r) out[0][r * k + r + 1] = Cplx<T>(T(1));
    for (std::size_t j = 1; j <= k; ++j) {
      auto aj = shifted(coeffs[j], t0, order);
      // b = a_j / a_0 as power series
      std::vector<Cplx<T>> b(order);
      for (std::size_t p = 0; p < order; ++p) {
        Cplx<T> acc = aj[p];
        for (std::size_t q = 1; q <= p && q < a0.size(); ++q) acc -= a0[q] * b[p - q];
        b[p] = acc / a0[0];
      }
      const std::size_t col = k - j;  // coefficient of y^(k-j)
      for (std::size_t p = 0; p < order; ++p) out[p][(k - 1) * k + col] = -b[p];
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Transport

struct TransportOptions {
  long double tol = 1e-12L;
  /// Step length as a fraction of the distance to the nearest singularity.
  long double step_fraction = 0.5L;
  long double max_angle_step = 0.392699081698724154807830422909937861L;  // pi/8
  std::size_t max_order = 400;
  /// Minimal admissible clearance of the path from singularities.
  long double min_clearance = 1e-9L;
  /// Skip the cheaper rungs of the precision ladder.
  unsigned min_bits = 64;
};

template <class T>
struct StepData {
  Cplx<T> t0;
  /// Series coefficients X_p (dim x cols), so X(t0 + s) = sum X_p s^p.
  std::vector<CMatrix<T>> series;
  std::size_t cols = 0;
};

template <class T>
CMatrix<T> eval_series(const StepData<T>& st, const Cplx<T>& s) {
  CMatrix<T> out(st.series.front().size());
  for (std::size_t p = st.series.size(); p-- > 0;)
    for (std::size_t e = 0; e < out.size(); ++e) out[e] = out[e] * s + st.series[p][e];
  return out;
}

template <class T>
T max_abs(const CMatrix<T>& m) {
  T best(0);
  for (const auto& z : m) best = std::max(best, z.abs());
  return best;
}

/// Observer callback: receives the series of each step together with the
/// arc parameter interval [u0, u1] covered and the arc.
template <class T>
using StepObserver = std::function<void(const StepData<T>&, const ArcSpec&, long double, long double)>;

template <class T>
struct TransportResult {
  CMatrix<T> X;
  long double rel_error = 0;
  std::size_t steps = 0;
};

template <class T, class Field>
TransportResult<T> transport(const Field& f, CMatrix<T> X, std::size_t cols, const ComplexPath& path,
                             const TransportOptions& opt, const StepObserver<T>& observer = {}) {
  const std::size_t dim = f.dim;
  TransportResult<T> res;
  const T eps = std::numeric_limits<T>::epsilon();
  for (const auto& arc : path) {
    long double u = 0;
    while (u < 1) {
      Cplx<T> t0 = arc.template point_t<T>(u);
      long double rho = std::numeric_limits<long double>::infinity();
      for (const auto& s : f.singularities()) rho = std::min(rho, to_ld((t0 - s).abs()));
      if (rho < opt.min_clearance)
        throw Error(ErrorCode::ClearanceLost, "path passes within " + std::to_string(static_cast<double>(rho)) +
                                                  " of a singular point");
      long double h = std::isinf(rho) ? arc.length() : opt.step_fraction * rho;
      long double L = arc.length();
      long double du = L > 0 ? h / L : 1;
      if (arc.kind != ArcSpec::Kind::Segment) {
        long double dth = std::fabs(arc.theta1 - arc.theta0);
        if (dth > 0) du = std::min(du, opt.max_angle_step / dth);
        // chord of the arc must stay within the step radius
        if (arc.radius > 0 && dth > 0) du = std::min(du, h / (arc.radius * dth));
      }
      long double u1 = std::min<long double>(1, u + du);
      Cplx<T> hstep = arc.template point_t<T>(u1) - t0;
      T hmag = hstep.abs();
      // series with adaptive order
      T rad = T(std::isinf(rho) ? 2 * to_ld(hmag) + 1 : rho);
      std::size_t order = 16;
      StepData<T> st;
      st.t0 = t0;
      st.cols = cols;
      for (;;) {
        auto A = f.expand(t0, order);
        st.series.assign(order + 1, CMatrix<T>(dim * cols));
        st.series[0] = X;
        for (std::size_t p = 0; p < order; ++p) {
          CMatrix<T>& next = st.series[p + 1];
          for (std::size_t q = 0; q <= p; ++q) {
            const CMatrix<T>& Aq = A[q];
            const CMatrix<T>& Xr = st.series[p - q];
            for (std::size_t i = 0; i < dim; ++i)
              for (std::size_t l = 0; l < dim; ++l) {
                const Cplx<T>& aq = Aq[i * dim + l];
                if (aq.re == 0 && aq.im == 0) continue;
                for (std::size_t c = 0; c < cols; ++c) next[i * cols + c] += aq * Xr[l * cols + c];
              }
          }
          T inv = T(1) / T(static_cast<long>(p + 1));
          for (auto& z : next) z = inv * z;
        }
        T x0 = max_abs(X);
        if (x0 == 0) x0 = 1;
        // tail estimate from the last terms
        T hp(1);
        T last(0), prev(0);
        for (std::size_t p = 0; p <= order; ++p) {
          T term = max_abs(st.series[p]) * hp;
          prev = last;
          last = term;
          hp *= rad;
        }
        (void)prev;
        // the series is evaluated at |s| <= hmag <= rad/2 along the arc
        T ratio = hmag / rad;
        using std::pow;
        T tail = last * pow(ratio, T(static_cast<long>(order))) * 2 / x0;
        if (tail < eps || order >= opt.max_order) {
          res.rel_error += to_ld(tail) + 8.0L * static_cast<long double>(order) * to_ld(eps);
          break;
        }
        order = std::min(opt.max_order, order * 2);
      }
      if (observer) observer(st, arc, u, u1);
      X = eval_series(st, hstep);
      ++res.steps;
      u = u1;
    }
  }
  res.X = std::move(X);
  return res;
}

// ---------------------------------------------------------------------------
// Precision ladder

enum class Precision { Bits64 = 64, Bits128 = 128, Bits256 = 256 };

template <class F>
auto with_precision_ladder(long double tol, F&& run, unsigned min_bits = 64) {
  if (min_bits <= 64) {
    auto r64 = run(Real64{});
    if (r64.rel_error <= tol) return r64;
  }
  if (min_bits <= 128) {
    auto r128 = run(Real128{});
    if (r128.rel_error <= tol) return r128;
  }
  auto r256 = run(Real256{});
  if (r256.rel_error <= tol) return r256;
  throw Error(ErrorCode::ToleranceUnreachable,
              "estimated error " + std::to_string(static_cast<double>(r256.rel_error)) + " above tolerance");
}

struct SolutionFrame {
  Complex base_point;
  Complex end_point;
  std::size_t dim = 0;
  std::size_t cols = 0;
  std::vector<Complex> X;
  std::vector<long double> radius;
  long double rel_error = 0;
  unsigned precision_bits = 64;
  /// Entries at full working precision when above 64 bits.
  std::vector<Cplx<Real256>> X_hi;

  Complex operator()(std::size_t r, std::size_t c) const { return X[r * cols + c]; }
};

namespace detail {

template <class T>
CMatrix<T> identity_matrix(std::size_t n) {
  CMatrix<T> m(n * n);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = Cplx<T>(T(1));
  return m;
}

template <class T>
unsigned bits_of() {
  if constexpr (std::is_same_v<T, Real64>) return 64;
  if constexpr (std::is_same_v<T, Real128>) return 128;
  return 256;
}

struct FrameRun {
  SolutionFrame frame;
  long double rel_error = 0;
};

template <class FieldOf>
FrameRun run_frame(const FieldOf& make_field, const ComplexPath& path, const TransportOptions& opt,
                   const std::vector<Complex>* initial, std::size_t cols_in) {
  return with_precision_ladder(opt.tol, [&](auto tag) {
    using T = decltype(tag);
    auto field = make_field(tag);
    const std::size_t dim = field.dim;
    std::size_t cols = initial ? cols_in : dim;
    CMatrix<T> X0;
    if (initial) {
      for (const auto& z : *initial) X0.push_back(Cplx<T>::from(z));
    } else {
      X0 = identity_matrix<T>(dim);
    }
    auto r = transport<T>(field, X0, cols, path, opt);
    FrameRun fr;
    fr.rel_error = r.rel_error;
    fr.frame.base_point = path.front().start();
    fr.frame.end_point = path.back().end();
    fr.frame.dim = dim;
    fr.frame.cols = cols;
    T scale = max_abs(r.X);
    for (const auto& z : r.X) {
      fr.frame.X.push_back({to_ld(z.re), to_ld(z.im)});
      fr.frame.radius.push_back(static_cast<long double>(r.rel_error) * to_ld(scale) +
                                std::numeric_limits<long double>::epsilon() * to_ld(z.abs()));
    }
    if constexpr (!std::is_same_v<T, Real64>)
      for (const auto& z : r.X) fr.frame.X_hi.push_back(Cplx<Real256>::from(z));
    fr.frame.rel_error = r.rel_error;
    fr.frame.precision_bits = bits_of<T>();
    return fr;
  }, opt.min_bits);
}

}  // namespace detail

/// Fundamental matrix (initial value identity) transported along a path.
inline SolutionFrame integrate(const FuchsianSystem& s, const ComplexPath& path, const TransportOptions& opt = {}) {
  auto make = [&](auto tag) { return SystemField<decltype(tag)>(s); };
  return detail::run_frame(make, path, opt, nullptr, 0).frame;
}

inline SolutionFrame integrate(const ScalarOperator& op, const ComplexPath& path, const TransportOptions& opt = {}) {
  auto make = [&](auto tag) { return OperatorField<decltype(tag)>(op); };
  return detail::run_frame(make, path, opt, nullptr, 0).frame;
}

// ---------------------------------------------------------------------------
// Argument tracking

/// y(t) = covector . X(t) . v for a solution specified by its initial value.
struct SolutionSeed {
  std::vector<Complex> covector;  // size dim
  std::vector<Complex> initial;   // size dim, value of x at the path start
};

struct ArgumentTrace {
  long double net = 0;       // net increment of a continuous argument
  long double total = 0;     // total variation (sum of |increments|)
  long double min_modulus = std::numeric_limits<long double>::infinity();
  long double max_modulus = 0;
  long double rel_error = 0;
  std::size_t samples = 0;
  unsigned precision_bits = 64;
  std::vector<Complex> points;  // sampled points (optional)
  std::vector<Complex> values;
};

struct ArgumentOptions {
  TransportOptions transport;
  /// Maximal relative change of y between consecutive samples.
  long double max_relative_change = 0.5L;
  int max_bisections = 24;
  /// |y| below this multiple of the error estimate signals a zero on the path.
  long double zero_margin = 1e3L;
  bool keep_samples = false;
};

namespace detail {

template <class T, class Field>
ArgumentTrace track_argument(const Field& f, const SolutionSeed& seed, const ComplexPath& path,
                             const ArgumentOptions& opt, ErrorCode zero_code) {
  const std::size_t dim = f.dim;
  std::vector<Cplx<T>> cov;
  for (const auto& z : seed.covector) cov.push_back(Cplx<T>::from(z));
  CMatrix<T> X0;
  for (const auto& z : seed.initial) X0.push_back(Cplx<T>::from(z));
  ArgumentTrace tr;
  tr.precision_bits = bits_of<T>();
  bool have_prev = false;
  Cplx<T> prev;
  T scale(0);
  for (const auto& z : X0) scale = std::max(scale, z.abs());
  const long double eps = to_ld(std::numeric_limits<T>::epsilon());

  auto y_at = [&](const StepData<T>& st, const Cplx<T>& t) {
    CMatrix<T> x = eval_series(st, t - st.t0);
    Cplx<T> y(T(0));
    for (std::size_t i = 0; i < dim; ++i) y += cov[i] * x[i];
    T xs = max_abs(x);
    return std::make_pair(y, xs);
  };

  std::function<void(const StepData<T>&, const ArcSpec&, long double, long double, const Cplx<T>&,
                     const Cplx<T>&, int)>
      refine;
  auto accept = [&](const Cplx<T>& y, T xs, const Complex& pt) {
    long double ym = to_ld(y.abs());
    long double floor = opt.zero_margin * (eps * 64 + tr.rel_error) * to_ld(std::max(xs, scale));
    if (ym <= floor) throw Error(zero_code, "solution vanishes (numerically) near the path");
    tr.min_modulus = std::min(tr.min_modulus, ym);
    tr.max_modulus = std::max(tr.max_modulus, ym);
    if (have_prev) {
      Cplx<T> q = y / prev;
      long double d = to_ld(q.arg());
      tr.net += d;
      tr.total += std::fabs(d);
    }
    prev = y;
    have_prev = true;
    ++tr.samples;
    if (opt.keep_samples) {
      tr.points.push_back(pt);
      tr.values.push_back({to_ld(y.re), to_ld(y.im)});
    }
  };
  refine = [&](const StepData<T>& st, const ArcSpec& arc, long double ua, long double ub, const Cplx<T>& ya,
               const Cplx<T>& yb, int depth) {
    // ya already accepted; decide whether yb can follow directly.
    T rel = (yb - ya).abs() / std::max(ya.abs(), std::numeric_limits<T>::min());
    if (rel <= T(opt.max_relative_change)) {
      auto pt = arc.point(ub);
      auto [y, xs] = y_at(st, Cplx<T>::from(pt));
      accept(y, xs, pt);
      return;
    }
    if (depth >= opt.max_bisections) throw Error(zero_code, "argument cannot be resolved near the path");
    long double um = 0.5L * (ua + ub);
    auto [ym, xsm] = y_at(st, arc.template point_t<T>(um));
    (void)xsm;
    refine(st, arc, ua, um, ya, ym, depth + 1);
    refine(st, arc, um, ub, ym, yb, depth + 1);
  };

  StepObserver<T> obs = [&](const StepData<T>& st, const ArcSpec& arc, long double u0, long double u1) {
    const int base = 8;
    Complex p0 = arc.point(u0);
    auto [y0, xs0] = y_at(st, Cplx<T>::from(p0));
    if (!have_prev) accept(y0, xs0, p0);
    Cplx<T> ya = prev;
    long double ua = u0;
    for (int i = 1; i <= base; ++i) {
      long double ub = u0 + (u1 - u0) * static_cast<long double>(i) / base;
      auto [yb, xsb] = y_at(st, arc.template point_t<T>(ub));
      (void)xsb;
      refine(st, arc, ua, ub, ya, yb, 0);
      ya = prev;
      ua = ub;
    }
  };
  auto r = transport<T>(f, X0, 1, path, opt.transport, obs);
  tr.rel_error = r.rel_error;
  return tr;
}

template <class FieldOf>
ArgumentTrace run_argument(const FieldOf& make_field, const SolutionSeed& seed, const ComplexPath& path,
                           const ArgumentOptions& opt, ErrorCode zero_code) {
  struct R {
    ArgumentTrace tr;
    long double rel_error;
  };
  auto r = with_precision_ladder(opt.transport.tol, [&](auto tag) {
    using T = decltype(tag);
    auto field = make_field(tag);
    ArgumentTrace tr = track_argument<T>(field, seed, path, opt, zero_code);
    return R{tr, tr.rel_error};
  });
  return r.tr;
}

}  // namespace detail

/// Continuous argument increment of y along an arc (or path).
inline ArgumentTrace var_arg_measure(const ScalarOperator& op, const std::vector<Complex>& initial_derivatives,
                                     const ComplexPath& path, const ArgumentOptions& opt = {}) {
  SolutionSeed seed;
  seed.covector.assign(op.order, Complex(0));
  seed.covector[0] = Complex(1);
  seed.initial = initial_derivatives;
  auto make = [&](auto tag) { return OperatorField<decltype(tag)>(op); };
  return detail::run_argument(make, seed, path, opt, ErrorCode::ZeroOnArc);
}

inline ArgumentTrace var_arg_measure(const FuchsianSystem& s, const SolutionSeed& seed, const ComplexPath& path,
                                     const ArgumentOptions& opt = {}) {
  auto make = [&](auto tag) { return SystemField<decltype(tag)>(s); };
  return detail::run_argument(make, seed, path, opt, ErrorCode::ZeroOnArc);
}

struct ZeroCount {
  long count = 0;
  long double winding = 0;  // total argument / 2 pi
  long double margin = 0;   // distance of the winding from the nearest integer
  ArgumentTrace trace;
};

namespace detail {

inline ZeroCount finish_count(const ArgumentTrace& tr) {
  ZeroCount zc;
  zc.trace = tr;
  zc.winding = tr.net / (2 * pi_value<long double>());
  zc.count = std::lround(zc.winding);
  zc.margin = std::fabs(zc.winding - static_cast<long double>(zc.count));
  if (zc.margin > 0.25L)
    throw Error(ErrorCode::ZeroOnBoundary, "winding number not certified (margin " +
                                               std::to_string(static_cast<double>(zc.margin)) + ")");
  return zc;
}

}  // namespace detail

/// Number of zeros (with multiplicity) inside a closed positively oriented
/// boundary, for the branch obtained by continuation along the boundary.
inline ZeroCount count_zeros_region(const FuchsianSystem& s, const SolutionSeed& seed, const ComplexPath& boundary,
                                    const ArgumentOptions& opt = {}) {
  auto make = [&](auto tag) { return SystemField<decltype(tag)>(s); };
  return detail::finish_count(detail::run_argument(make, seed, boundary, opt, ErrorCode::ZeroOnBoundary));
}

inline ZeroCount count_zeros_region(const ScalarOperator& op, const std::vector<Complex>& initial_derivatives,
                                    const ComplexPath& boundary, const ArgumentOptions& opt = {}) {
  SolutionSeed seed;
  seed.covector.assign(op.order, Complex(0));
  seed.covector[0] = Complex(1);
  seed.initial = initial_derivatives;
  auto make = [&](auto tag) { return OperatorField<decltype(tag)>(op); };
  return detail::finish_count(detail::run_argument(make, seed, boundary, opt, ErrorCode::ZeroOnBoundary));
}

// ---------------------------------------------------------------------------
// Monodromy

enum class UnitStatus { CertifiedUnit, CertifiedNonUnit, Indeterminate };

inline const char* to_string(UnitStatus s) {
  switch (s) {
    case UnitStatus::CertifiedUnit: return "certified-unit";
    case UnitStatus::CertifiedNonUnit: return "certified-non-unit";
    case UnitStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct EigenEnclosure {
  Complex center;
  long double radius = 0;
  unsigned multiplicity = 1;
  long double modulus_lo = 0, modulus_hi = 0;
  UnitStatus status = UnitStatus::Indeterminate;
};

struct MonodromyData {
  ComplexPath loop;
  SolutionFrame frame;  // M = frame.X
  Complex determinant;
  std::vector<EigenEnclosure> eigenvalues;
  bool all_unit() const {
    return std::all_of(eigenvalues.begin(), eigenvalues.end(),
                       [](const EigenEnclosure& e) { return e.status == UnitStatus::CertifiedUnit; });
  }
  bool any_non_unit() const {
    return std::any_of(eigenvalues.begin(), eigenvalues.end(),
                       [](const EigenEnclosure& e) { return e.status == UnitStatus::CertifiedNonUnit; });
  }
};

namespace detail {

/// Characteristic polynomial of a floating matrix (Faddeev-LeVerrier), lowest first.
template <class T>
std::vector<Cplx<T>> charpoly_t(const std::vector<Cplx<T>>& m, std::size_t n) {
  using C = Cplx<T>;
  std::vector<C> c(n + 1);
  c[n] = C(T(1));
  std::vector<C> B(n * n);
  for (std::size_t i = 0; i < n; ++i) B[i * n + i] = C(T(1));
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<C> AB(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) AB[i * n + j] += m[i * n + l] * B[l * n + j];
    C tr(T(0));
    for (std::size_t i = 0; i < n; ++i) tr += AB[i * n + i];
    c[n - k] = -(C(T(1) / T(static_cast<long>(k))) * tr);
    B = AB;
    for (std::size_t i = 0; i < n; ++i) B[i * n + i] += c[n - k];
  }
  return c;
}

inline std::vector<Complex> charpoly(const std::vector<Complex>& m, std::size_t n) { return charpoly_t(m, n); }

template <class T>
Cplx<T> peval(const std::vector<Cplx<T>>& c, const Cplx<T>& z, std::size_t deriv = 0) {
  // deriv-th derivative divided by deriv!
  using C = Cplx<T>;
  std::vector<C> d = c;
  for (std::size_t r = 0; r < deriv; ++r) {
    std::vector<C> e(d.size() > 1 ? d.size() - 1 : 1);
    for (std::size_t k = 1; k < d.size(); ++k) e[k - 1] = C(T(static_cast<long>(k))) * d[k];
    d = e;
  }
  T fact = 1;
  for (std::size_t r = 2; r <= deriv; ++r) fact *= T(static_cast<long>(r));
  C acc(T(0));
  for (std::size_t k = d.size(); k-- > 0;) acc = acc * z + d[k];
  return C(T(1) / fact) * acc;
}

template <class T>
std::vector<EigenEnclosure> eigen_enclosures_t(const std::vector<Cplx<T>>& m, std::size_t n, const T& err,
                                               long double unit_width) {
  using C = Cplx<T>;
  using std::pow;
  using std::sqrt;
  const T eps = std::numeric_limits<T>::epsilon();
  auto c = charpoly_t(m, n);
  T norm = 0;
  for (const auto& z : m) norm = std::max(norm, T(z.abs()));
  // coefficient perturbation bound: |dc_k| <= C(n,k) (n-k) (norm+err)^(n-k-1) n err, generously
  std::vector<T> dc(n + 1, T(0));
  for (std::size_t k = 0; k < n; ++k) {
    T binom = 1;
    for (std::size_t i = 0; i < n - k; ++i) binom = binom * T(static_cast<long>(n - i)) / T(static_cast<long>(i + 1));
    dc[k] = binom * T(static_cast<long>(n - k)) * pow(norm + err + 1, T(static_cast<long>(n - k - 1))) *
                T(static_cast<long>(n)) * err +
            64 * eps * pow(norm + 1, T(static_cast<long>(n - k)));
  }
  auto roots = aberth<T>(c, 1000, eps * 4);
  // clusters: start from single roots, merge groups whose disks meet
  struct Group {
    std::vector<C> members;
    C center;
    T r = 0;
  };
  auto measure = [&](Group& g) {
    C center(T(0));
    for (const auto& z : g.members) center += z;
    center = C(T(1) / T(static_cast<long>(g.members.size()))) * center;
    const std::size_t q = g.members.size();
    T spread = 0;
    for (const auto& z : g.members) spread = std::max(spread, T((z - center).abs()));
    T az = center.abs();
    T E = 0, zp = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      E += dc[k] * zp;
      zp *= az + 1;
    }
    T lead = peval(c, center, q).abs();
    if (lead <= 0) lead = std::numeric_limits<T>::min();
    T resid = peval(c, center, 0).abs();
    g.center = center;
    g.r = pow(2 * (E + resid) / lead, T(1) / T(static_cast<long>(q))) + spread;
  };
  std::vector<Group> groups;
  for (const auto& z : roots) {
    Group g;
    g.members.push_back(z);
    measure(g);
    groups.push_back(std::move(g));
  }
  // closest meeting pair first, so near-multiple roots pair up before wide disks swallow them
  for (;;) {
    std::size_t bi = 0, bj = 0;
    T best = -1;
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        T d = (groups[i].center - groups[j].center).abs();
        if (d <= groups[i].r + groups[j].r && (best < 0 || d < best)) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (best < 0) break;
    groups[bi].members.insert(groups[bi].members.end(), groups[bj].members.begin(), groups[bj].members.end());
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
    measure(groups[bi]);
  }
  std::vector<EigenEnclosure> out;
  for (const auto& g : groups) {
    const C& center = g.center;
    const T& r = g.r;
    const std::size_t q = g.members.size();
    T az = center.abs();
    EigenEnclosure e;
    e.center = {to_ld(center.re), to_ld(center.im)};
    e.radius = to_ld(r) * (1 + 1e-15L);
    e.multiplicity = static_cast<unsigned>(q);
    T mlo = az - r, mhi = az + r;
    e.modulus_lo = std::max(0.0L, to_ld(mlo));
    e.modulus_hi = to_ld(mhi);
    if (mlo > 1 || mhi < 1)
      e.status = UnitStatus::CertifiedNonUnit;
    else if (to_ld(mhi - mlo) < unit_width)
      e.status = UnitStatus::CertifiedUnit;
    else
      e.status = UnitStatus::Indeterminate;
    out.push_back(e);
  }
  return out;
}

/// Diagonal similarity by powers of two equalizing row and column norms.
template <class T>
std::vector<Cplx<T>> balance(std::vector<Cplx<T>> m, std::size_t n) {
  using std::ldexp;
  for (int sweep = 0; sweep < 40; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      T row = 0, col = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) {
          row += m[i * n + j].abs();
          col += m[j * n + i].abs();
        }
      if (row == 0 || col == 0) continue;
      int e = 0;
      T ratio = row / col;
      while (ratio > 4) {
        ratio /= 4;
        ++e;
      }
      while (ratio < T(1) / 4) {
        ratio *= 4;
        --e;
      }
      if (e == 0) continue;
      changed = true;
      // D_ii = 2^e: row i divided, column i multiplied
      for (std::size_t j = 0; j < n; ++j) {
        m[i * n + j] = Cplx<T>(ldexp(m[i * n + j].re, -e), ldexp(m[i * n + j].im, -e));
        m[j * n + i] = Cplx<T>(ldexp(m[j * n + i].re, e), ldexp(m[j * n + i].im, e));
      }
    }
    if (!changed) break;
  }
  return m;
}

/// Enclosures from a frame, at the frame's working precision.  The matrix is
/// balanced first and the transport error taken relative to the balanced norm.
inline std::vector<EigenEnclosure> frame_enclosures(const SolutionFrame& f, long double unit_width = 1e-6L) {
  if (f.X_hi.empty()) {
    auto b = balance(f.X, f.dim);
    long double scale = 0;
    for (const auto& z : b) scale = std::max(scale, z.abs());
    const long double eps = std::numeric_limits<long double>::epsilon();
    long double err = f.rel_error * scale + 4 * eps * (scale + 1);
    return eigen_enclosures_t<long double>(b, f.dim, err, unit_width);
  }
  auto b = balance(f.X_hi, f.dim);
  Real256 scale = 0;
  for (const auto& z : b) scale = std::max(scale, Real256(z.abs()));
  const Real256 eps = std::numeric_limits<Real256>::epsilon();
  Real256 precision_eps = f.precision_bits >= 256 ? eps : Real256(std::numeric_limits<Real128>::epsilon());
  Real256 err = Real256(f.rel_error) * scale + 4 * precision_eps * (scale + 1);
  return eigen_enclosures_t<Real256>(b, f.dim, err, unit_width);
}

}  // namespace detail

/// Eigenvalue enclosures of a floating matrix with entrywise error radius.
inline std::vector<EigenEnclosure> eigen_enclosures(const std::vector<Complex>& m, std::size_t n, long double err,
                                                    long double unit_width = 1e-6L) {
  return detail::eigen_enclosures_t<long double>(m, n, err, unit_width);
}

namespace detail {

template <class Model>
MonodromyData monodromy_of(const Model& model, const ComplexPath& loop, const TransportOptions& opt) {
  MonodromyData md;
  md.loop = loop;
  md.frame = integrate(model, loop, opt);
  md.eigenvalues = frame_enclosures(md.frame);
  auto c = charpoly(md.frame.X, md.frame.dim);
  md.determinant = (md.frame.dim % 2 == 0 ? Complex(1) : Complex(-1)) * c[0];
  if (!md.all_unit() && !md.any_non_unit() && opt.min_bits < 256) {
    // clustered eigenvalues spread like err^(1/q); retry at higher precision
    TransportOptions tighter = opt;
    tighter.min_bits = opt.min_bits < 128 ? 128 : 256;
    tighter.tol = std::min(opt.tol, tighter.min_bits == 128 ? 1e-32L : 1e-48L);
    try {
      return monodromy_of(model, loop, tighter);
    } catch (const Error&) {
    }
  }
  return md;
}

}  // namespace detail

inline MonodromyData monodromy(const FuchsianSystem& s, const ComplexPath& loop, const TransportOptions& opt = {}) {
  return detail::monodromy_of(s, loop, opt);
}

inline MonodromyData monodromy(const ScalarOperator& op, const ComplexPath& loop, const TransportOptions& opt = {}) {
  return detail::monodromy_of(op, loop, opt);
}

}  // namespace oscillate

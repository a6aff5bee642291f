#include <gtest/gtest.h>

#include "support.hpp"

using namespace oscillate;
using fx::gq;

namespace {

ScalarOperator op_of(std::vector<Poly> a) {
  ScalarOperator op;
  op.order = a.size() - 1;
  op.a = std::move(a);
  return op;
}

const Poly T{gq(0), gq(1)};

void expect_locus(const NormalizedChart& chart, const FuchsianSystem& ns) {
  EXPECT_FALSE(ns.has_infinity());
  auto poles = ns.finite_poles();
  for (std::size_t i = 0; i < poles.size(); ++i) {
    EXPECT_LE(poles[i].norm2(), chart.R_bound * chart.R_bound);
    for (std::size_t j = i + 1; j < poles.size(); ++j) EXPECT_GE((poles[i] - poles[j]).norm2(), 1);
  }
}

/// y^(j) = xi_j . x, evaluated numerically from the trace.
std::vector<Complex> derivatives_from_trace(const ReductionTrace& tr, const Complex& t, const std::vector<Complex>& x,
                                            std::size_t k) {
  std::vector<Complex> out;
  Complex q = fx::eval_ld(tr.Q, t), qk(1);
  for (std::size_t j = 0; j <= k; ++j) {
    Complex acc(0);
    for (std::size_t i = 0; i < x.size(); ++i) acc = acc + fx::eval_ld(tr.alpha[j][i], t) * x[i];
    out.push_back(acc / qk);
    qk = qk * q;
  }
  return out;
}

}  // namespace

TEST(DeriveScalar, FirstOrderEuler) {
  auto [op, tr] = derive_scalar(fx::euler_scalar(3), {gq(1)});
  // t y' - 3 y
  EXPECT_EQ(op.order, 1u);
  EXPECT_EQ(op.a[0], T);
  EXPECT_EQ(op.a[1], Poly(gq(-3)));
}

TEST(DeriveScalar, RotationEuler) {
  // oracle: t^(+-i) have indicial polynomial s(s-1) + s + 1 = s^2 + 1
  auto [op, tr] = derive_scalar(fx::euler_rotation(), {gq(1), gq(0)});
  EXPECT_EQ(op.order, 2u);
  EXPECT_EQ(op.a[0], T * T);
  EXPECT_EQ(op.a[1], T);
  EXPECT_EQ(op.a[2], Poly(gq(1)));
  EXPECT_FALSE(tr.degenerate);
}

TEST(DeriveScalar, EulerDiagSpan) {
  // span{t^N, 1}: indicial roots {0, N} give t y'' - (N-1) y'
  for (long N : {2, 3, 5, 9}) {
    auto [op, tr] = derive_scalar(fx::euler_diag(N), {gq(1), gq(1)});
    EXPECT_EQ(op.order, 2u);
    EXPECT_EQ(op.a[0], T);
    EXPECT_EQ(op.a[1], Poly(gq(-(N - 1))));
    EXPECT_TRUE(op.a[2].is_zero());
  }
}

TEST(DeriveScalar, DegenerateCombination) {
  // y = x_2 is constant: the first dependency is y' = 0
  auto [op, tr] = derive_scalar(fx::euler_diag(4), {gq(0), gq(1)});
  EXPECT_TRUE(tr.degenerate);
  EXPECT_EQ(op.order, 1u);
  EXPECT_TRUE(op.a[1].is_zero());
}

TEST(DeriveScalar, WedgeNonzeroForPolynomialSpan) {
  // solutions 1, t, ..., t^(n-1); combination sums them
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<GaussianRational> d, c(n, gq(1));
    for (std::size_t k = 0; k < n; ++k) d.push_back(gq(static_cast<long>(k)));
    auto [op, tr] = derive_scalar(fx::euler(ExactMatrix::diagonal(d)), c);
    EXPECT_EQ(op.order, n);
    EXPECT_FALSE(tr.degenerate);
    EXPECT_FALSE(tr.wedges.back().is_zero());
  }
}

TEST(Slope, Examples) {
  auto s1 = slope(op_of({T * T, T, Poly(gq(1))}));
  EXPECT_EQ(s1.lo, 1);
  EXPECT_EQ(s1.hi, 1);
  EXPECT_EQ(slope(op_of({T, Poly(gq(-2)), Poly()})).lo, 2);
  GaussianRational c = gq(7, 1);
  auto base = op_of({T * T + T, Poly(gq(3)) * T, Poly(gq(1, 2))});
  auto scaled = base;
  for (auto& p : scaled.a) p = c * p;
  auto a = slope(base), b = slope(scaled);
  EXPECT_TRUE(a.lo <= b.hi && b.lo <= a.hi);
}

TEST(SlopeBound, Examples) {
  auto one = op_of({T * T, T, Poly(gq(1))});
  EXPECT_TRUE(verify_slope_bound(one, Enclosure(Rational(14)), Rational(1)));
  auto two = op_of({T, Poly(gq(-2)), Poly()});
  EXPECT_FALSE(verify_slope_bound(two, Enclosure(Rational(2)), Rational(1, 2)));
  EXPECT_THROW(verify_slope_bound(two, Enclosure(Rational(2)), Rational(0)), Error);
}

TEST(NormalizeChart, EulerPolesOnSphere) {
  auto s = fx::euler_diag(5);
  auto [chart, ns] = normalize_chart(s);
  expect_locus(chart, ns);
  EXPECT_FALSE(chart.identity());
  ASSERT_EQ(ns.m(), 2u);
  EXPECT_EQ(ns.residues[0], s.residues[0]);
  EXPECT_EQ(ns.residues[1], s.residues[1]);
  for (std::size_t j = 0; j < s.m(); ++j) EXPECT_EQ(chart.apply(s.poles[j]), ns.poles[j]);
}

TEST(NormalizeChart, AlreadyNormalized) {
  FuchsianSystem s;
  s.n = 1;
  s.poles = {SpherePoint(gq(0)), SpherePoint(gq(1)), SpherePoint(gq(-1))};
  s.residues = {ExactMatrix{{gq(2)}}, ExactMatrix{{gq(-1)}}, ExactMatrix{{gq(-1)}}};
  auto [chart, ns] = normalize_chart(s);
  EXPECT_TRUE(chart.identity());
  EXPECT_EQ(ns.poles, s.poles);
}

TEST(NormalizeChart, CollidingFamily) {
  auto s = fx::nilpotent_family(Rational(1, 4));
  auto [chart, ns] = normalize_chart(s);
  expect_locus(chart, ns);
  EXPECT_GE(chart.min_distance, 1);
}

// ---------------------------------------------------------------------------
// properties

TEST(ReductionProperties, AlphaRecursion) {
  // alpha_{k+1} = Q alpha_k' - k Q' alpha_k + alpha_k P, rederived here
  std::mt19937_64 rng(31);
  CorpusOptions opt;
  opt.spectral_class = false;
  opt.gaussian_entries = true;
  for (int it = 0; it < 30; ++it) {
    auto e = random_system(rng, opt);
    auto [op, tr] = derive_scalar(e.system, e.combination);
    const std::size_t n = e.system.n;
    const long m = static_cast<long>(e.system.finite_poles().size());
    Poly dQ = tr.Q.derivative();
    for (std::size_t k = 0; k + 1 < tr.alpha.size(); ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        Poly want = tr.Q * tr.alpha[k][j].derivative() - GaussianRational(static_cast<long>(k)) * dQ * tr.alpha[k][j];
        for (std::size_t i = 0; i < n; ++i) want += tr.alpha[k][i] * tr.P[i][j];
        EXPECT_EQ(want, tr.alpha[k + 1][j]) << "k = " << k << " j = " << j;
      }
    }
    for (std::size_t k = 0; k < tr.alpha.size(); ++k)
      for (const auto& p : tr.alpha[k]) EXPECT_LE(p.degree(), static_cast<long>(k) * m);
    for (const auto& p : op.a) EXPECT_LE(p.degree(), static_cast<long>(n * n) * m);
    EXPECT_TRUE(tr.degree_bounds_hold);
    EXPECT_FALSE(op.a[0].is_zero());
    // gcd(a_0, ..., a_k) = 1
    EXPECT_EQ(poly_gcd(op.a), Poly(gq(1)));
  }
}

TEST(ReductionProperties, ScalingInvariance) {
  std::mt19937_64 rng(32);
  CorpusOptions opt;
  opt.spectral_class = false;
  opt.gaussian_entries = true;
  for (int it = 0; it < 20; ++it) {
    auto e = random_system(rng, opt);
    GaussianRational c = fx::rand_gauss(rng);
    if (c.is_zero()) c = gq(3, -2);
    auto scaled = e.combination;
    for (auto& z : scaled) z = c * z;
    auto a = derive_scalar(e.system, e.combination).first;
    auto b = derive_scalar(e.system, scaled).first;
    EXPECT_EQ(a.order, b.order);
    EXPECT_EQ(a.a, b.a);
  }
}

TEST(ReductionProperties, AnnihilatesContinuedSolutions) {
  std::mt19937_64 rng(33);
  CorpusOptions opt;
  opt.spectral_class = false;
  opt.gaussian_entries = true;
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  for (int it = 0; it < 25; ++it) {
    auto e = random_system(rng, opt);
    auto [op, tr] = derive_scalar(e.system, e.combination);
    // a segment between two points well away from the poles
    auto poles = e.system.finite_poles();
    auto clear = [&](const Complex& z) {
      for (const auto& p : poles)
        if ((z - to_complex(p)).abs() < 0.3L) return false;
      return true;
    };
    Complex a, b;
    do a = Complex(2.5L * u(rng), 2.5L * u(rng)); while (!clear(a));
    do b = a + Complex(0.4L * u(rng), 0.4L * u(rng)); while (!clear(b));
    ComplexPath path{ArcSpec::segment(a, b)};
    bool ok = true;
    for (const auto& p : poles) ok = ok && path[0].distance_to(to_complex(p)) > 0.2L;
    if (!ok) continue;
    auto frame = integrate(e.system, path);
    std::vector<Complex> x0;
    for (std::size_t i = 0; i < e.system.n; ++i) x0.emplace_back(u(rng), u(rng));
    std::vector<Complex> x(e.system.n, Complex(0));
    for (std::size_t r = 0; r < e.system.n; ++r)
      for (std::size_t c = 0; c < e.system.n; ++c) x[r] = x[r] + frame(r, c) * x0[c];
    // xi_0 carries the combination
    auto y = derivatives_from_trace(tr, b, x, op.order);
    Complex res(0);
    long double scale = 0;
    for (std::size_t j = 0; j <= op.order; ++j) {
      Complex term = fx::eval_ld(op.a[j], b) * y[op.order - j];
      res = res + term;
      scale += term.abs();
    }
    EXPECT_LE(res.abs(), 1e-8L * scale + 1e-300L) << to_string(op);
    ++checked;
  }
  EXPECT_GE(checked, 15);
}

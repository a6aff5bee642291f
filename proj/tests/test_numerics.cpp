#include <gtest/gtest.h>

#include "support.hpp"

using namespace oscillate;
using fx::gq;

namespace {

const long double kPi = pi_value<long double>();

std::vector<Complex> mat_mul(const std::vector<Complex>& a, const std::vector<Complex>& b, std::size_t n) {
  std::vector<Complex> c(n * n, Complex(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = c[i * n + j] + a[i * n + k] * b[k * n + j];
  return c;
}

long double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  long double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, (a[k] - b[k]).abs());
  return d;
}

std::vector<Complex> eye(std::size_t n) {
  std::vector<Complex> m(n * n, Complex(0));
  for (std::size_t k = 0; k < n; ++k) m[k * n + k] = Complex(1);
  return m;
}

/// y = 2 cos(ln t) and y' at t for t^2 y'' + t y' + y.
std::vector<Complex> cos_log(const Complex& t) {
  Complex w = log(t), i(0, 1);
  Complex c = exp(i * w) + exp(-(i * w));
  Complex s = (exp(i * w) - exp(-(i * w))) / i;
  return {c, -(s / t)};
}

ScalarOperator rotation_operator() {
  ScalarOperator op;
  op.order = 2;
  op.a = {Poly{gq(0), gq(0), gq(1)}, Poly{gq(0), gq(1)}, Poly(gq(1))};
  return op;
}

ComplexPath polygon(const std::vector<Complex>& v) {
  ComplexPath p;
  for (std::size_t k = 0; k < v.size(); ++k) p.push_back(ArcSpec::segment(v[k], v[(k + 1) % v.size()]));
  return p;
}

SolutionSeed diag_seed(long N, const Complex& z0) {
  // y = t^N - 1: x = (t^N, 1)
  return {{Complex(1), Complex(-1)}, {powi(z0, static_cast<unsigned long>(N)), Complex(1)}};
}

}  // namespace

TEST(Integrate, EulerDiagLoopIsIdentity) {
  auto f = integrate(fx::euler_diag(3), {ArcSpec::circle(Complex(0), 1)}, {});
  EXPECT_LE(max_diff(f.X, eye(2)), 1e-10L);
}

TEST(Integrate, ScalarSegment) {
  // y' = y/t, y = t
  auto f = integrate(fx::euler_scalar(1), {ArcSpec::segment(Complex(1), Complex(2))});
  EXPECT_NEAR(f(0, 0).re, 2.0L, 1e-12L);
  EXPECT_NEAR(f(0, 0).im, 0.0L, 1e-12L);
}

TEST(Integrate, RotationMonodromyMatchesExponential) {
  // exp(2 pi i A) for A = [[0,1],[-1,0]]: eigenvalues exp(-+2 pi)
  auto md = monodromy(fx::euler_rotation(), {ArcSpec::circle(Complex(0), 1)});
  ASSERT_EQ(md.eigenvalues.size(), 2u);
  std::vector<long double> mods;
  for (const auto& e : md.eigenvalues) mods.push_back(e.center.abs());
  std::sort(mods.begin(), mods.end());
  EXPECT_NEAR(mods[0] / std::exp(-2 * kPi), 1.0L, 1e-8L);
  EXPECT_NEAR(mods[1] / std::exp(2 * kPi), 1.0L, 1e-8L);
  EXPECT_TRUE(md.any_non_unit());
}

TEST(Monodromy, UnitExamples) {
  auto d = monodromy(fx::euler_diag(4), {ArcSpec::circle(Complex(0), 1)});
  EXPECT_TRUE(d.all_unit());
  for (const auto& e : d.eigenvalues) EXPECT_NEAR((e.center - Complex(1)).abs(), 0.0L, 1e-9L);
  auto nil = monodromy(fx::euler(ExactMatrix{{gq(0), gq(1)}, {gq(0), gq(0)}}), {ArcSpec::circle(Complex(0), 1)});
  EXPECT_TRUE(nil.all_unit());
  // unipotent: M = [[1, 2 pi i], [0, 1]]
  EXPECT_NEAR(nil.frame(0, 1).im, 2 * kPi, 1e-9L);
}

TEST(VarArg, Examples) {
  ArgumentOptions ao;
  auto cube = var_arg_measure(fx::euler_scalar(3), {{Complex(1)}, {Complex(1)}}, {ArcSpec::circle(Complex(0), 1)}, ao);
  EXPECT_NEAR(cube.net, 6 * kPi, 1e-9L);
  auto constant = var_arg_measure(fx::euler_diag(3), {{Complex(0), Complex(1)}, {Complex(1), Complex(2)}},
                                  {ArcSpec::circle(Complex(0), 1)}, ao);
  EXPECT_NEAR(constant.net, 0.0L, 1e-12L);
  EXPECT_NEAR(constant.total, 0.0L, 1e-12L);
}

TEST(VarArg, ImaginaryPower) {
  // t^i = exp(-theta + i ln|t|): arg constant on circles, grows by ln(b/a) radially
  FuchsianSystem s = fx::euler(ExactMatrix{{gq(0, 1)}});
  const long double e = std::exp(1.0L);
  Complex z0(e, 0);
  Complex y0 = exp(Complex(0, 1) * log(z0));
  auto circ = var_arg_measure(s, {{Complex(1)}, {y0}}, {ArcSpec::arc(Complex(0), e, 0, kPi)});
  EXPECT_NEAR(circ.net, 0.0L, 1e-12L);
  // |t^i| = e^(-theta) at the end of the half turn
  auto f = integrate(s, {ArcSpec::arc(Complex(0), e, 0, kPi)});
  EXPECT_NEAR((f(0, 0) * y0).abs(), std::exp(-kPi), 1e-12L);
  auto radial = var_arg_measure(s, {{Complex(1)}, {Complex(1)}}, {ArcSpec::segment(Complex(1), z0)});
  EXPECT_NEAR(radial.net, 1.0L, 1e-12L);
}

TEST(CountZeros, EulerAnnulus) {
  auto boundary = detail::slit_annulus(Complex(0), 0.5L, 2.0L, -kPi / 2);
  for (long N : {1, 5, 7}) {
    auto z = count_zeros_region(fx::euler_diag(N), diag_seed(N, boundary.front().start()), boundary);
    EXPECT_EQ(z.count, N);
    EXPECT_LT(z.margin, 1e-6L);
  }
}

TEST(CountZeros, CosLogAnnulus) {
  // zeros of cos ln t at t = exp(-pi (k + 1/2)) on the positive axis; k = 1, 2 fall inside
  auto boundary = detail::slit_annulus(Complex(0), std::exp(-3 * kPi), std::exp(-kPi), -kPi / 2);
  auto z = count_zeros_region(rotation_operator(), cos_log(boundary.front().start()), boundary);
  EXPECT_GE(z.count, 1);
  EXPECT_EQ(z.count, 2);
}

TEST(CountZeros, ZeroFreeRectangle) {
  auto box = polygon({Complex(0.6L, -0.5L), Complex(1.8L, -0.5L), Complex(1.8L, 0.5L), Complex(0.6L, 0.5L)});
  auto z = count_zeros_region(fx::euler_scalar(1), {{Complex(1)}, {box.front().start()}}, box);
  EXPECT_EQ(z.count, 0);
}

TEST(CountZeros, ZeroOnBoundaryDetected) {
  // t^2 - 1 vanishes at t = 1 on the unit circle
  try {
    count_zeros_region(fx::euler_diag(2), diag_seed(2, Complex(0, -1)), {ArcSpec::circle(Complex(0), 1, true, -kPi / 2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroOnBoundary);
  }
}

// ---------------------------------------------------------------------------
// properties

TEST(NumericsProperties, LoopComposition) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int it = 0; it < 8; ++it) {
    // poles at -1 and 1 with random residues, base point i
    ExactMatrix a = fx::rand_matrix(rng, 2), b = fx::rand_matrix(rng, 2);
    FuchsianSystem s;
    s.n = 2;
    s.poles = {SpherePoint(gq(-1)), SpherePoint(gq(1)), SpherePoint::infinity()};
    s.residues = {a, b, -(a + b)};
    Complex base(0, 1);
    ComplexPath g1 = {ArcSpec::circle(Complex(-1), std::sqrt(2.0L), true, kPi / 4)};
    ComplexPath g2 = {ArcSpec::circle(Complex(1), std::sqrt(2.0L), true, 3 * kPi / 4)};
    ComplexPath both = g1;
    both.insert(both.end(), g2.begin(), g2.end());
    auto m1 = integrate(s, g1), m2 = integrate(s, g2), m12 = integrate(s, both);
    auto prod = mat_mul(m2.X, m1.X, 2);
    long double scale = 0;
    for (const auto& z : prod) scale = std::max(scale, z.abs());
    EXPECT_LE(max_diff(prod, m12.X), 1e-9L * (1 + scale));
  }
}

TEST(NumericsProperties, HomotopyInvariance) {
  // the same annulus cut at different angles and a disk drawn as a polygon
  for (long N : {3, 6}) {
    for (long double psi : {-kPi / 2, 0.3L, 2.0L}) {
      auto b = detail::slit_annulus(Complex(0), 0.5L, 2.0L, psi);
      EXPECT_EQ(count_zeros_region(fx::euler_diag(N), diag_seed(N, b.front().start()), b).count, N);
    }
    std::vector<Complex> v;
    for (int k = 0; k < 12; ++k) v.push_back(Complex::polar(1.7L, 2 * kPi * k / 12 + 0.1L));
    // the polygon encloses the same N roots of unity
    auto poly = polygon(v);
    EXPECT_EQ(count_zeros_region(fx::euler_diag(N), diag_seed(N, poly.front().start()), poly).count, N);
  }
}

TEST(NumericsProperties, AdditiveOverSubdivision) {
  // upper and lower halves of the annulus 1/2 < |t| < 2, cut along the real axis
  const long double r = 0.5L, R = 2.0L;
  for (long N : {3, 4, 7}) {
    // keep the cuts away from zeros: rotate the cut by a small angle
    const long double a = kPi / (2 * N) + 0.05L;
    ComplexPath upper = {ArcSpec::segment(Complex::polar(r, a), Complex::polar(R, a)), ArcSpec::arc(Complex(0), R, a, a + kPi),
                         ArcSpec::segment(Complex::polar(R, a + kPi), Complex::polar(r, a + kPi)),
                         ArcSpec::arc(Complex(0), r, a + kPi, a)};
    ComplexPath lower = {ArcSpec::segment(Complex::polar(r, a + kPi), Complex::polar(R, a + kPi)),
                         ArcSpec::arc(Complex(0), R, a + kPi, a + 2 * kPi),
                         ArcSpec::segment(Complex::polar(R, a), Complex::polar(r, a)),
                         ArcSpec::arc(Complex(0), r, a + 2 * kPi, a + kPi)};
    auto whole = detail::slit_annulus(Complex(0), r, R, a);
    long cu = count_zeros_region(fx::euler_diag(N), diag_seed(N, upper.front().start()), upper).count;
    long cl = count_zeros_region(fx::euler_diag(N), diag_seed(N, lower.front().start()), lower).count;
    long cw = count_zeros_region(fx::euler_diag(N), diag_seed(N, whole.front().start()), whole).count;
    EXPECT_EQ(cu + cl, cw);
    EXPECT_EQ(cw, N);
  }
}

TEST(NumericsProperties, WronskianNeverVanishes) {
  // Liouville: det X = exp(int tr A) = (t1/t0)^(tr A) for Euler systems
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.3, 2.0), th(-3, 3);
  for (int it = 0; it < 10; ++it) {
    ExactMatrix a = fx::rand_matrix(rng, 2);
    Complex z0 = Complex::polar(u(rng), th(rng)), z1 = Complex::polar(u(rng), th(rng));
    Complex mid = Complex::polar(1.0L, th(rng));
    ComplexPath path = {ArcSpec::segment(z0, mid), ArcSpec::segment(mid, z1)};
    bool clear = path[0].distance_to(Complex(0)) > 0.1L && path[1].distance_to(Complex(0)) > 0.1L;
    if (!clear) continue;
    auto f = integrate(fx::euler(a), path);
    Complex det = f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
    EXPECT_GT(det.abs(), 0.0L);
    // along this path the branch of log is continuous unless it crosses the negative axis; compare moduli
    Complex tr = to_complex(a.trace());
    Complex lw = log(z1) - log(z0);
    long double want = std::exp((tr * lw).re);
    long double want_alt1 = std::exp((tr * (lw + Complex(0, 2 * kPi))).re);
    long double want_alt2 = std::exp((tr * (lw - Complex(0, 2 * kPi))).re);
    long double got = det.abs();
    long double best = std::min({std::fabs(got / want - 1), std::fabs(got / want_alt1 - 1), std::fabs(got / want_alt2 - 1)});
    EXPECT_LT(best, 1e-9L);
  }
}

TEST(NumericsProperties, ReversalReturnsToIdentity) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1, 1);
  TransportOptions opt;
  opt.tol = 1e-12L;
  for (int it = 0; it < 10; ++it) {
    ExactMatrix a = fx::rand_matrix(rng, 2), b = fx::rand_matrix(rng, 2);
    FuchsianSystem s;
    s.n = 2;
    s.poles = {SpherePoint(gq(-1)), SpherePoint(gq(1)), SpherePoint::infinity()};
    s.residues = {a, b, -(a + b)};
    ArcSpec seg = ArcSpec::segment(Complex(0.3L * u(rng), 0.5L + 0.4L * u(rng)), Complex(0.3L * u(rng), -0.5L - 0.4L * u(rng)));
    auto f = integrate(s, {seg, seg.reversed()}, opt);
    EXPECT_LE(max_diff(f.X, eye(2)), 2 * opt.tol * 100) << "it = " << it;
    EXPECT_LE(f.rel_error, 2 * opt.tol * 100);
  }
}

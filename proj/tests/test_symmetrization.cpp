#include <gtest/gtest.h>

#include "support.hpp"

using namespace oscillate;
using fx::gq;

namespace {

FuchsianSystem three_poles(const GaussianRational& a, const GaussianRational& b, const ExactMatrix& ra,
                           const ExactMatrix& rb) {
  FuchsianSystem s;
  s.n = ra.rows();
  s.poles = {SpherePoint(a), SpherePoint(b), SpherePoint::infinity()};
  s.residues = {ra, rb, -(ra + rb)};
  return s;
}

bool operator_is_real(const ScalarOperator& op) {
  for (const auto& p : op.a)
    for (const auto& c : p.coeffs())
      if (!c.is_real()) return false;
  return true;
}

}  // namespace

TEST(Reflect, PolynomialExamples) {
  EXPECT_EQ(reflect(Poly{gq(0), gq(1, 2)}, AxisSpec::real_axis()), (Poly{gq(0), gq(1, -2)}));
  Poly real{gq(3), gq(-1), gq(2)};
  EXPECT_EQ(reflect(real, AxisSpec::real_axis()), real);
}

TEST(Reflect, SystemExamples) {
  auto s = three_poles(gq(0, 1), gq(2), ExactMatrix{{gq(1)}}, ExactMatrix{{gq(2)}});
  auto r = reflect(s, AxisSpec::real_axis());
  EXPECT_EQ(r.poles[0], SpherePoint(gq(0, -1)));
  EXPECT_EQ(r.poles[1], SpherePoint(gq(2)));
  auto real = fx::euler_diag(3);
  auto rr = reflect(real, AxisSpec::real_axis());
  EXPECT_EQ(rr.poles, real.poles);
  EXPECT_EQ(rr.residues, real.residues);
}

TEST(ChooseAxis, SymmetricPair) {
  FuchsianSystem s = three_poles(gq(1), gq(-1), ExactMatrix{{gq(1)}}, ExactMatrix{{gq(1)}});
  s.poles.pop_back();
  s.residues = {ExactMatrix{{gq(1)}}, ExactMatrix{{gq(-1)}}};
  auto axis = choose_axis(s, gq(0));
  // poles on the chosen axis are their own mirrors: the real axis wins
  EXPECT_TRUE(axis.on_axis(gq(1)));
  EXPECT_EQ(axis.reflect(gq(1)), gq(1));
  EXPECT_EQ(axis.reflect(gq(-1)), gq(-1));
}

TEST(ChooseAxis, SinglePoleOffAxis) {
  // exp(i pi/3), approximated by 1/2 + (866/1000) i
  FuchsianSystem s;
  s.n = 1;
  s.poles = {SpherePoint(fx::gs("1/2", "433/500")), SpherePoint::infinity()};
  s.residues = {ExactMatrix{{gq(1)}}, ExactMatrix{{gq(-1)}}};
  auto axis = choose_axis(s, gq(0));
  // m = 1, pigeonhole scale sin(pi / 2m^2) = 1 for unit |tau|
  Rational d2 = mirror_distance2(s, axis);
  EXPECT_GE(fx::ld(d2), 1.0L);
  EXPECT_EQ(axis.direction.norm2(), 1);
}

TEST(ChooseAxis, FourPointsOnCircle) {
  FuchsianSystem s;
  s.n = 1;
  s.poles = {SpherePoint(gq(1)), SpherePoint(gq(0, 1)), SpherePoint(gq(-1)), SpherePoint(gq(0, -1))};
  s.residues = {ExactMatrix{{gq(1)}}, ExactMatrix{{gq(-1)}}, ExactMatrix{{gq(1)}}, ExactMatrix{{gq(-1)}}};
  auto axis = choose_axis(s, fx::gs("1/3", "1/7"));
  long double want = 2 * std::sin(pi_value<long double>() / 16);
  EXPECT_GE(std::sqrt(fx::ld(mirror_distance2(s, axis))), want * 0.25L);
  // the maximizer beats every other candidate of the grid
  for (long k = -7; k <= 8; ++k) {
    AxisSpec other;
    other.base = fx::gs("1/3", "1/7");
    other.direction = k == 0 ? GaussianRational(1) : pythagorean_direction(k * pi_value<long double>() / 16);
    EXPECT_GE(mirror_distance2(s, axis), mirror_distance2(s, other));
  }
}

TEST(Symmetrize, BlockStructure) {
  auto s = three_poles(gq(1, 1), gq(-1, 2), ExactMatrix{{gq(1), gq(0, 1)}, {gq(0), gq(2)}},
                       ExactMatrix{{gq(0), gq(1)}, {gq(1), gq(-1)}});
  auto sym = symmetrize(s, AxisSpec::real_axis());
  EXPECT_EQ(sym.doubled.n, 4u);
  EXPECT_LE(sym.doubled.m(), 2 * s.m());
  EXPECT_EQ(sym.doubled.m(), 5u);  // infinity is shared
  validate(sym.doubled);
  for (const auto& a : sym.doubled.residues)
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 2; c < 4; ++c) {
        EXPECT_TRUE(a(r, c).is_zero());
        EXPECT_TRUE(a(c, r).is_zero());
      }
}

TEST(Symmetrize, RealSystemDuplicatesBlocks) {
  auto s = fx::euler_diag(3);
  auto sym = symmetrize(s, AxisSpec::real_axis());
  EXPECT_EQ(sym.doubled.m(), 2u);
  for (const auto& a : sym.doubled.residues)
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(a(r, c), a(r + 2, c + 2));
  auto [op, tr] = derive_scalar(sym.doubled_axis_chart, doubled_combination({gq(1), gq(-1)}));
  EXPECT_TRUE(operator_is_real(op));
}

// ---------------------------------------------------------------------------
// properties

TEST(SymmetrizationProperties, ReflectInvolution) {
  std::mt19937_64 rng(51);
  CorpusOptions opt;
  opt.spectral_class = false;
  opt.gaussian_entries = true;
  for (int it = 0; it < 60; ++it) {
    AxisSpec axis;
    axis.base = fx::rand_gauss(rng);
    axis.direction = pythagorean_direction(std::uniform_real_distribution<double>(-1.5, 1.5)(rng));
    Poly p = fx::rand_poly(rng, rng() % 6);
    EXPECT_EQ(reflect(reflect(p, axis), axis), p);
    auto s = random_system(rng, opt).system;
    auto rr = reflect(reflect(s, axis), axis);
    EXPECT_EQ(rr.poles, s.poles);
    EXPECT_EQ(rr.residues, s.residues);
    // a polynomial vanishing at tau reflects to one vanishing at the mirror point
    GaussianRational tau = fx::rand_gauss(rng);
    EXPECT_TRUE(reflect(Poly::linear_factor(tau) * p, axis).eval(axis.reflect(tau)).is_zero());
  }
}

TEST(SymmetrizationProperties, SymmetricCombinationRealOnAxis) {
  std::mt19937_64 rng(52);
  CorpusOptions opt;
  opt.spectral_class = false;
  opt.gaussian_entries = true;
  opt.max_rank = 2;
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  for (int it = 0; it < 20; ++it) {
    auto e = random_system(rng, opt);
    auto axis = choose_axis(e.system, fx::rand_gauss(rng, 1, 2));
    auto sym = symmetrize(e.system, axis);
    // on the axis chart the mirror is conjugation; walk along the real line
    const auto& d = sym.doubled_axis_chart;
    auto poles = d.finite_poles();
    long double lo = -3, hi = 3;
    bool clear = true;
    for (const auto& p : poles) clear = clear && std::fabs(fx::ld(p.im)) > 0.2L;
    if (!clear) continue;  // real poles would cut the walk
    const std::size_t n = e.system.n;
    std::vector<Complex> x0;
    for (std::size_t i = 0; i < n; ++i) x0.emplace_back(u(rng), u(rng));
    for (std::size_t i = 0; i < n; ++i) x0.push_back(x0[i].conj());
    std::vector<Complex> cov;
    for (const auto& c : doubled_combination(e.combination)) cov.push_back(to_complex(c));
    for (int k = 1; k <= 6; ++k) {
      long double t = lo + (hi - lo) * k / 6;
      auto f = integrate(d, {ArcSpec::segment(Complex(lo), Complex(t))});
      Complex y(0);
      long double scale = 0;
      for (std::size_t r = 0; r < 2 * n; ++r)
        for (std::size_t c = 0; c < 2 * n; ++c) {
          Complex term = cov[r] * f(r, c) * x0[c];
          y = y + term;
          scale += term.abs();
        }
      EXPECT_LE(std::fabs(y.im), 1e-8L * scale);
    }
    ++checked;
    auto [op, rt] = derive_scalar(d, doubled_combination(e.combination));
    EXPECT_TRUE(operator_is_real(op)) << to_string(op);
  }
  EXPECT_GE(checked, 8);
}

TEST(SymmetrizationProperties, DoubledCarpetControl) {
  const long double C = fx::ld(BoundConstants{}.double_carpet_c);
  for (const auto& e : corpus(40, 53)) {
    auto sym = symmetrize(e.system, choose_axis(e.system, gq(0)));
    EXPECT_LE(sym.nu_axis, C * static_cast<long double>(e.system.n + e.system.m()));
    // every genuine pole survives the doubling
    for (std::size_t j = 0; j < e.system.m(); ++j) {
      if (e.system.residues[j].is_zero()) continue;
      bool found = false;
      for (const auto& p : sym.doubled.poles) found = found || p == e.system.poles[j];
      EXPECT_TRUE(found);
    }
  }
}

#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace oscillate;
using fx::gq;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalInconsistency;
}

bool overlaps(const Enclosure& a, const Enclosure& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace

TEST(Validate, EulerIsProper) {
  auto r = validate(fx::euler_diag(5));
  EXPECT_TRUE(r.proper);
  EXPECT_EQ(r.membership(), "F_{2,2}");
}

TEST(Validate, ResidueSumDefect) {
  auto s = fx::euler_diag(5);
  s.residues[1] = ExactMatrix(2, 2);
  try {
    validate(s);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResidueSumNonzero);
    EXPECT_EQ(e.defect(), (ExactMatrix{{gq(5), gq(0)}, {gq(0), gq(0)}}));
  }
}

TEST(Validate, DuplicatePolesListed) {
  auto s = fx::nilpotent_family(Rational(1, 2));
  s.poles[2] = s.poles[1];
  try {
    validate(s);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicatePoles);
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{1, 2}));
  }
}

TEST(Validate, FourPointFamily) {
  auto r = validate(fx::nilpotent_family(Rational(1, 2)));
  EXPECT_EQ(r.m, 4u);
  EXPECT_TRUE(r.proper);
}

TEST(Validate, ZeroResidueFlagsPartialClosure) {
  FuchsianSystem s = fx::euler_diag(2);
  s.poles.push_back(SpherePoint(GaussianRational(1)));
  s.residues.push_back(ExactMatrix(2, 2));
  auto r = validate(s);
  EXPECT_FALSE(r.proper);
  EXPECT_EQ(r.zero_residues, (std::vector<std::size_t>{2}));
}

TEST(SpectralClass, Examples) {
  auto rot = spectral_class_check(fx::euler_rotation());
  EXPECT_FALSE(rot.in_class);
  ASSERT_TRUE(rot.first_violation.has_value());
  EXPECT_EQ(*rot.first_violation, 0u);
  ASSERT_EQ(rot.residues[0].eigenvalues.size(), 2u);
  for (const auto& e : rot.residues[0].eigenvalues) {
    EXPECT_EQ(e.center.re, 0);
    EXPECT_EQ(abs(e.center.im), 1);
  }
  EXPECT_TRUE(spectral_class_check(fx::nilpotent_family(Rational(1, 2))).in_class);
  EXPECT_TRUE(spectral_class_check(fx::euler_diag(7)).in_class);
}

TEST(SpectralClass, NilpotentDoubleEigenvalue) {
  auto r = residue_spectrum(ExactMatrix{{gq(0), gq(1)}, {gq(0), gq(0)}}, 0);
  EXPECT_TRUE(r.real_spectrum);
  ASSERT_EQ(r.eigenvalues.size(), 1u);
  EXPECT_EQ(r.eigenvalues[0].multiplicity, 2u);
}

TEST(RFlat, EulerValue) {
  // chordal dist(0, inf) = 1, both orders; residue norms 5 + 5
  auto v = r_flat(fx::euler_diag(5));
  EXPECT_EQ(v.lo, 14);
  EXPECT_EQ(v.hi, 14);
  EXPECT_EQ(r_flat(fx::euler_diag(5), PairConvention::Unordered).lo, 13);
}

TEST(RFlat, BlowUpAlongFamily) {
  Rational prev = 0;
  for (int k = 1; k <= 10; ++k) {
    Rational eps(1, 1L << k);
    auto v = r_flat(fx::nilpotent_family(eps));
    EXPECT_GE(v.lo, 2);
    EXPECT_GT(v.lo, prev) << "k = " << k;
    prev = v.hi;
  }
}

TEST(RFlat, ChordalOracle) {
  // independent evaluation in long double
  std::mt19937_64 rng(21);
  for (int it = 0; it < 50; ++it) {
    GaussianRational a = fx::rand_gauss(rng), b = fx::rand_gauss(rng);
    if (a == b) continue;
    Complex za = to_complex(a), zb = to_complex(b);
    long double d = (za - zb).abs() / std::sqrt((1 + za.norm2()) * (1 + zb.norm2()));
    Enclosure e = chordal_distance(SpherePoint(a), SpherePoint(b));
    EXPECT_NEAR(fx::ld(e.mid()), d, 1e-15L);
    Enclosure ei = chordal_distance(SpherePoint(a), SpherePoint::infinity());
    EXPECT_NEAR(fx::ld(ei.mid()), 1 / std::sqrt(1 + za.norm2()), 1e-15L);
  }
}

TEST(RSharp, Examples) {
  Poly q{gq(-1), gq(0), gq(1)};
  PolyMatrix id{{Poly(gq(1)), Poly()}, {Poly(), Poly(gq(1))}};
  auto v = r_sharp(id, q);
  EXPECT_EQ(v.lo, Rational(2) + Rational(1, 4) + 2 + 2);
  EXPECT_TRUE(v.is_exact());
  EXPECT_EQ(code_of([] { r_sharp({{Poly(gq(1))}}, Poly{gq(0), gq(0), gq(1)}); }), ErrorCode::ZeroDiscriminant);
  PolyMatrix d{{Poly(gq(5)), Poly()}, {Poly(), Poly()}};
  EXPECT_EQ(r_sharp(d, Poly{gq(0), gq(1)}).lo, 5 + 4);
}

TEST(NaturalCarpet, Examples) {
  auto E = [](long x) { return Enclosure(Rational(x)); };
  EXPECT_EQ(natural_carpet({E(2), E(3)}, CarpetOp::ShiftedProduct).lo, 20);
  EXPECT_EQ(natural_carpet({E(2), E(7), E(3)}, CarpetOp::Max).lo, 7);
  EXPECT_EQ(natural_carpet({E(5)}, CarpetOp::Sum).lo, 5);
  EXPECT_EQ(code_of([&] { natural_carpet({E(1)}, CarpetOp::Sum); }), ErrorCode::InvalidArgument);
}

// ---------------------------------------------------------------------------
// properties

TEST(ModelProperties, CarpetsInvariantUnderPolePermutation) {
  std::mt19937_64 rng(22);
  CorpusOptions opt;
  opt.spectral_class = false;
  opt.gaussian_entries = true;
  for (int it = 0; it < 60; ++it) {
    FuchsianSystem s = random_system(rng, opt).system;
    FuchsianSystem t = s;
    std::vector<std::size_t> perm(s.m());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < perm.size(); ++k) {
      t.poles[k] = s.poles[perm[k]];
      t.residues[k] = s.residues[perm[k]];
    }
    EXPECT_TRUE(overlaps(r_flat(s), r_flat(t)));
    if (!s.has_infinity()) {
      auto a = r_sharp(numerator_matrix(s), pole_polynomial(s));
      auto b = r_sharp(numerator_matrix(t), pole_polynomial(t));
      EXPECT_TRUE(overlaps(a, b));
    }
  }
}

TEST(ModelProperties, FoldLawSumMaxRadius) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> v(2, 1000);
  for (CarpetOp op : {CarpetOp::Sum, CarpetOp::Max, CarpetOp::Radius}) {
    for (int it = 0; it < 100; ++it) {
      std::vector<CarpetValue> x, y, xy;
      for (int k = 0, nx = 1 + rng() % 4; k < nx; ++k) x.push_back(Enclosure(Rational(v(rng), 1 + rng() % 3)));
      for (int k = 0, ny = 1 + rng() % 4; k < ny; ++k) y.push_back(Enclosure(Rational(v(rng), 1 + rng() % 3)));
      for (auto& e : x) e = max(e, Enclosure(Rational(2)));
      for (auto& e : y) e = max(e, Enclosure(Rational(2)));
      xy = x;
      xy.insert(xy.end(), y.begin(), y.end());
      auto whole = natural_carpet(xy, op);
      auto folded = natural_carpet({natural_carpet(x, op), natural_carpet(y, op)}, op);
      EXPECT_TRUE(overlaps(whole, folded)) << to_string(op);
      std::shuffle(xy.begin(), xy.end(), rng);
      EXPECT_TRUE(overlaps(whole, natural_carpet(xy, op))) << to_string(op);
    }
  }
}

TEST(ModelProperties, ShiftedProductSandwich) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> lg(1.0, 16.0);
  for (int it = 0; it < 500; ++it) {
    Rational a = rational_from_double(std::exp2(lg(rng))), b = rational_from_double(std::exp2(lg(rng)));
    Rational prod = a * b;
    auto c = carpet_combine(Enclosure(a), Enclosure(b), CarpetOp::ShiftedProduct);
    EXPECT_LE(prod, c.lo * c.lo);       // (ab)^(1/2) <= a(.)b
    EXPECT_LE(c.hi, prod * prod);       // a(.)b <= (ab)^2
  }
}

TEST(ModelProperties, SpectralClassSimilarityInvariant) {
  std::mt19937_64 rng(25);
  for (int it = 0; it < 80; ++it) {
    std::size_t n = 1 + rng() % 3;
    ExactMatrix a = fx::rand_matrix(rng, n);
    // half the samples real symmetric, so both outcomes occur
    if (it % 2 == 0)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a(r, c) = a(c, r) = GaussianRational(a(r, c).re);
    ExactMatrix S = fx::rand_matrix(rng, n, 3);
    if (determinant(S).is_zero()) continue;
    ExactMatrix b = S * a * inverse(S);
    EXPECT_EQ(residue_spectrum(a, 0).real_spectrum, residue_spectrum(b, 0).real_spectrum);
    EXPECT_EQ(characteristic_polynomial(a), characteristic_polynomial(b));
    if (it % 2 == 0) EXPECT_TRUE(residue_spectrum(a, 0).real_spectrum);
  }
}

TEST(ModelProperties, RFlatAtLeastTwo) {
  std::mt19937_64 rng(26);
  CorpusOptions opt;
  opt.spectral_class = false;
  for (int it = 0; it < 50; ++it) EXPECT_GE(r_flat(random_system(rng, opt).system).lo, 2);
}

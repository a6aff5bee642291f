#include <gtest/gtest.h>

#include "support.hpp"

using namespace oscillate;
using fx::gq;

TEST(PolyNorm, SumOfAbsoluteValues) {
  Poly p{gq(5), gq(-4), gq(3)};
  EXPECT_EQ(poly_norm(p).lo, 12);
  EXPECT_TRUE(poly_norm(p).is_exact());
  EXPECT_EQ(poly_norm(Poly()).hi, 0);
}

TEST(PolyNorm, GaussianCoefficient) {
  // |2+i| = sqrt 5, oracle from long double sqrt
  Poly p{gq(0), gq(-3), gq(0), gq(2, 1)};
  Enclosure e = poly_norm(p);
  long double want = std::sqrt(5.0L) + 3;
  EXPECT_LE(fx::ld(e.lo), want + 1e-18L);
  EXPECT_GE(fx::ld(e.hi), want - 1e-18L);
  EXPECT_LT(e.width(), Rational(1, 1000000000));
  // e contains sqrt5 + 3 exactly: (lo-3)^2 <= 5 <= (hi-3)^2
  EXPECT_LE((e.lo - 3) * (e.lo - 3), 5);
  EXPECT_GE((e.hi - 3) * (e.hi - 3), 5);
}

TEST(PolyMul, Examples) {
  Poly a{gq(-1), gq(1)}, b{gq(1), gq(1)};
  EXPECT_EQ(poly_mul(a, b), (Poly{gq(-1), gq(0), gq(1)}));
  Poly p{gq(3, 1), gq(0), gq(-2)};
  EXPECT_EQ(poly_mul(p, Poly(gq(1))), p);
  Poly c = poly_mul(Poly{gq(-1), gq(1)}, Poly{gq(-2), gq(1)});
  EXPECT_EQ(c, (Poly{gq(2), gq(-3), gq(1)}));
  EXPECT_EQ(poly_norm(c).lo, 6);
  EXPECT_LE(poly_norm(c).hi, poly_norm(Poly{gq(-1), gq(1)}).lo * poly_norm(Poly{gq(-2), gq(1)}).lo);
}

TEST(PolyGcd, Examples) {
  Poly t{gq(0), gq(1)};
  Poly tm1{gq(-1), gq(1)};
  EXPECT_EQ(poly_gcd({tm1 * Poly{gq(1), gq(1)}, tm1}), tm1);
  EXPECT_EQ(poly_gcd({t, Poly(gq(1))}), Poly(gq(1)));
  EXPECT_EQ(poly_gcd({t * t * tm1, t * tm1 * tm1}), t * tm1);
}

TEST(PolyGcd, AllZeroIsAnError) {
  try {
    poly_gcd({Poly(), Poly()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllZero);
  }
}

TEST(MatrixNorm, Examples) {
  EXPECT_EQ(matrix_norm(ExactMatrix{{gq(5), gq(0)}, {gq(0), gq(0)}}).lo, 5);
  EXPECT_TRUE(matrix_norm(ExactMatrix{{gq(5), gq(0)}, {gq(0), gq(0)}}).is_exact());
  EXPECT_EQ(matrix_norm(ExactMatrix(3, 3)).hi, 0);
  Enclosure r = matrix_norm(ExactMatrix{{gq(0), gq(1)}, {gq(-1), gq(0)}});
  EXPECT_LE(r.lo * r.lo, 2);
  EXPECT_GE(r.hi * r.hi, 2);
}

TEST(Rational, CanonicalForm) {
  Rational q = parse_rational("6/-4");
  EXPECT_EQ(q.get_num(), -3);
  EXPECT_EQ(q.get_den(), 2);
  EXPECT_EQ(parse_rational("1.25e1"), Rational(25, 2));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

// ---------------------------------------------------------------------------
// properties

TEST(ExactProperties, NormSubmultiplicative) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    Poly p = fx::rand_poly(rng, rng() % 6), q = fx::rand_poly(rng, rng() % 6);
    EXPECT_LE(poly_norm(p * q).lo, (poly_norm(p) * poly_norm(q)).hi);
  }
}

TEST(ExactProperties, GcdDividesInputs) {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 150; ++it) {
    Poly common = fx::rand_poly(rng, rng() % 3, 3, 2);
    Poly a = common * fx::rand_poly(rng, rng() % 4, 3, 2), b = common * fx::rand_poly(rng, rng() % 4, 3, 2);
    Poly g = poly_gcd({a, b});
    EXPECT_TRUE(divmod(a, g).second.is_zero());
    EXPECT_TRUE(divmod(b, g).second.is_zero());
    EXPECT_EQ(g.leading(), GaussianRational(1));
    EXPECT_GE(g.degree(), common.degree());
  }
}

TEST(ExactProperties, RingLaws) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    Poly a = fx::rand_poly(rng, rng() % 5), b = fx::rand_poly(rng, rng() % 5), c = fx::rand_poly(rng, rng() % 5);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    GaussianRational x = fx::rand_gauss(rng), y = fx::rand_gauss(rng), z = fx::rand_gauss(rng);
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x + y, y + x);
    if (!y.is_zero()) EXPECT_EQ((x / y) * y, x);
  }
}

TEST(ExactProperties, SqrtEnclosuresNestAsPrecisionGrows) {
  std::mt19937_64 rng(14);
  for (int it = 0; it < 200; ++it) {
    Rational x = abs(fx::rand_rational(rng, 1000000, 999)) + 1;
    Enclosure coarse = sqrt_enclosure(x, 16), fine = sqrt_enclosure(x, 64);
    EXPECT_LE(coarse.lo, fine.lo);
    EXPECT_GE(coarse.hi, fine.hi);
    EXPECT_LE(fine.lo * fine.lo, x);
    EXPECT_GE(fine.hi * fine.hi, x);
  }
}

TEST(ExactProperties, RoundingBracketsValue) {
  std::mt19937_64 rng(15);
  for (int it = 0; it < 200; ++it) {
    Rational x = fx::rand_rational(rng, 1000000007, 1000003);
    EXPECT_LE(round_down(x, 20), x);
    EXPECT_GE(round_up(x, 20), x);
  }
}

TEST(ExactProperties, ResultantDiscriminant) {
  // disc(t^2 + b t + c) = b^2 - 4c
  std::mt19937_64 rng(16);
  for (int it = 0; it < 50; ++it) {
    GaussianRational b = fx::rand_gauss(rng), c = fx::rand_gauss(rng);
    EXPECT_EQ(discriminant(Poly{c, b, gq(1)}), b * b - GaussianRational(4) * c);
  }
}

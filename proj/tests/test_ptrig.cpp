#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "plyap/ptrig.hpp"

using namespace plyap;

// Reference values: tests/oracles/mpmath_values.py (40-digit quadrature + root finding).

TEST(PiP, FrozenValues) {
  EXPECT_NEAR(pi_p(3.0), 2.418399152312290467, 1e-15);
  EXPECT_NEAR(pi_p(1.5), 4.836798304624580935, 1e-14);
  EXPECT_NEAR(pi_p(1.2), 10.47197551196597746, 1e-13);
  EXPECT_NEAR(pi_p(2.0), std::numbers::pi, 1e-15);
}

TEST(PiP, ConjugateSymmetry) {
  // p pi_p = q pi_q.
  for (double p : {1.2, 1.5, 2.5, 3.0, 7.0}) {
    const double q = p / (p - 1.0);
    EXPECT_NEAR(p * pi_p(p), q * pi_p(q), 1e-12) << p;
  }
}

TEST(PiP, RejectsBadExponent) {
  EXPECT_THROW(pi_p(1.0), domain_error);
  EXPECT_THROW(pi_p(0.5), domain_error);
  EXPECT_THROW(pi_p(NAN), domain_error);
  EXPECT_THROW(ExponentContext{1.0}, domain_error);
  EXPECT_THROW(ExponentContext{INFINITY}, domain_error);
}

TEST(Arcsin, FrozenValues) {
  struct Case { double p, x, expected; };
  for (const Case& c : {Case{3, 0.5, 0.5054747119318599948}, Case{3, 0.9, 0.9820785038842092358},
                        Case{1.5, 0.99, 1.924950777906903903}, Case{5, 0.999, 1.065351941068471462},
                        Case{1.2, 0.3, 0.3312966974216743365}}) {
    const ExponentContext ctx(c.p);
    EXPECT_NEAR(arcsin_p(ctx, c.x), c.expected, 1e-12) << c.p << " " << c.x;
  }
}

TEST(Arcsin, EndpointsAndDomain) {
  for (double p : {1.2, 2.0, 3.0, 5.0}) {
    const ExponentContext ctx(p);
    EXPECT_EQ(arcsin_p(ctx, 0.0), 0.0);
    EXPECT_NEAR(arcsin_p(ctx, 1.0), ctx.half_pi_p(), 1e-13);
    EXPECT_THROW(arcsin_p(ctx, -0.4), domain_error);
    EXPECT_THROW(arcsin_p(ctx, 1.0 + 1e-9), domain_error);
  }
}

TEST(Arcsinh, FrozenValues) {
  struct Case { double p, x, expected; };
  for (const Case& c : {Case{3, 2, 1.558098214855670786}, Case{1.5, 0.5, 0.4599541818647026941},
                        Case{5, 10, 3.244950339330976777}}) {
    const ExponentContext ctx(c.p);
    EXPECT_NEAR(arcsinh_p(ctx, c.x), c.expected, 1e-12) << c.p << " " << c.x;
  }
  const ExponentContext two(2.0);
  EXPECT_NEAR(arcsinh_p(two, 1.0), 0.8813735870195430252, 1e-14);
}

TEST(SinCos, FrozenValues) {
  struct Case { double p, x, s, c; };
  for (const Case& k : {Case{3, 0.5, 0.4947597385353170844, 0.9578805780503507481},
                        Case{3, 1.2, 0.9991682300771110881, 0.1355983467518574344},
                        Case{1.5, 2.0, 0.9939009856610755239, 0.04369767801085647477}}) {
    const ExponentContext ctx(k.p);
    const SinCos sc = sincos_p(ctx, k.x);
    EXPECT_NEAR(sc.sin, k.s, 1e-12) << k.p << " " << k.x;
    EXPECT_NEAR(sc.cos, k.c, 1e-11) << k.p << " " << k.x;
  }
}

TEST(SinhCosh, FrozenValues) {
  struct Case { double p, x, s, c; };
  for (const Case& k : {Case{3, 1.0, 1.080085238675321151, 1.312311109946794178},
                        Case{3, 3.0, 8.569569516334234839, 8.574106120050603650},
                        Case{1.5, 0.7, 0.8191152104299045706, 1.447401657501106836}}) {
    const ExponentContext ctx(k.p);
    const SinhCosh sc = sinhcosh_p(ctx, k.x);
    EXPECT_NEAR(sc.sinh / k.s, 1.0, 1e-12) << k.p << " " << k.x;
    EXPECT_NEAR(sc.cosh / k.c, 1.0, 1e-12) << k.p << " " << k.x;
  }
}

TEST(Cot, FrozenValue) {
  const ExponentContext ctx(3.0);
  EXPECT_NEAR(cot_p(ctx, 0.5), 1.936051993410080268, 1e-11);
  EXPECT_THROW(cot_p(ctx, 0.0), pole_error);
  EXPECT_THROW(cot_p(ctx, ctx.pi_p()), pole_error);
}

TEST(Classical, ReducesAtPTwo) {
  const ExponentContext ctx(2.0);
  for (double x = -7.0; x <= 7.0; x += 0.37) {
    EXPECT_NEAR(sin_p(ctx, x), std::sin(x), 1e-13) << x;
    EXPECT_NEAR(cos_p(ctx, x), std::cos(x), 1e-13) << x;
    EXPECT_NEAR(sinh_p(ctx, x) / std::sinh(x), 1.0, 1e-13) << x;
    EXPECT_NEAR(cosh_p(ctx, x) / std::cosh(x), 1.0, 1e-13) << x;
  }
  EXPECT_NEAR(sinh_p(ctx, 1.0), 1.175201193643801457, 1e-14);
  EXPECT_NEAR(cosh_p(ctx, 1.0), 1.543080634815243778, 1e-14);
}

class PtrigProperties : public ::testing::TestWithParam<double> {};

TEST_P(PtrigProperties, Pythagorean) {
  const ExponentContext ctx(GetParam());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(-3.0 * ctx.pi_p(), 3.0 * ctx.pi_p());
  for (int i = 0; i < 500; ++i) {
    const SinCos sc = sincos_p(ctx, xs(rng));
    EXPECT_NEAR(std::pow(std::abs(sc.sin), ctx.p()) + std::pow(std::abs(sc.cos), ctx.p()), 1.0, 1e-12);
  }
}

TEST_P(PtrigProperties, Hyperbolic) {
  const ExponentContext ctx(GetParam());
  for (double x = -10.0; x <= 10.0; x += 0.173) {
    const SinhCosh sc = sinhcosh_p(ctx, x);
    const double cp = std::pow(sc.cosh, ctx.p());
    EXPECT_NEAR((cp - std::pow(std::abs(sc.sinh), ctx.p())) / cp, 1.0 / cp, 1e-11) << x;
  }
}

TEST_P(PtrigProperties, SymmetryAndPeriod) {
  const ExponentContext ctx(GetParam());
  const double pp = ctx.pi_p();
  for (double x = 0.01; x < pp; x += 0.13) {
    EXPECT_NEAR(sin_p(ctx, -x), -sin_p(ctx, x), 1e-14);
    EXPECT_NEAR(cos_p(ctx, -x), cos_p(ctx, x), 1e-14);
    EXPECT_NEAR(sin_p(ctx, pp - x), sin_p(ctx, x), 1e-12);
    EXPECT_NEAR(sin_p(ctx, x + pp), -sin_p(ctx, x), 1e-12);
    EXPECT_NEAR(sin_p(ctx, x + 2.0 * pp), sin_p(ctx, x), 1e-12);
  }
}

TEST_P(PtrigProperties, Monotone) {
  const ExponentContext ctx(GetParam());
  double prev = -1.0;
  for (double x = 0.0; x <= ctx.half_pi_p(); x += ctx.half_pi_p() / 400.0) {
    const double s = sin_p(ctx, x);
    EXPECT_GE(s, prev);
    prev = s;
  }
}

TEST_P(PtrigProperties, RoundTrip) {
  const ExponentContext ctx(GetParam());
  for (double s = 0.0; s <= 1.0; s += 0.01) {
    EXPECT_NEAR(sin_p(ctx, arcsin_p(ctx, s)), s, 1e-12);
  }
  for (double s = 0.0; s <= 50.0; s += 0.7) {
    EXPECT_NEAR(sinh_p(ctx, arcsinh_p(ctx, s)), s, 1e-12 * std::max(1.0, s));
  }
}

TEST_P(PtrigProperties, DerivativesByCentralDifference) {
  const ExponentContext ctx(GetParam());
  const double h = 1e-5;
  // Stay away from the quarter points, where cos_p has limited smoothness.
  for (double x = 0.05; x < ctx.half_pi_p() - 0.05; x += 0.05) {
    EXPECT_NEAR((sin_p(ctx, x + h) - sin_p(ctx, x - h)) / (2 * h), cos_p(ctx, x), 1e-6) << x;
  }
  for (double x = 0.05; x < 3.0; x += 0.1) {
    const double d = (sinh_p(ctx, x + h) - sinh_p(ctx, x - h)) / (2 * h);
    EXPECT_NEAR(d / cosh_p(ctx, x), 1.0, 1e-6) << x;
  }
}

TEST_P(PtrigProperties, FastModeAgrees) {
  const ExponentContext ctx(GetParam());
  const ExponentContext fast(GetParam(), Accuracy::fast);
  for (double x = 0.1; x < ctx.pi_p(); x += 0.21) {
    EXPECT_NEAR(sin_p(fast, x), sin_p(ctx, x), 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, PtrigProperties, ::testing::Values(1.2, 1.5, 2.0, 3.0, 5.0));

TEST(Coth, DecreasesToOne) {
  for (double p : {1.5, 3.0}) {
    const ExponentContext ctx(p);
    double prev = INFINITY;
    for (double x = 0.1; x < 10.0; x += 0.3) {
      const double c = coth_p(ctx, x);
      EXPECT_LE(c, prev);
      EXPECT_GE(c, 1.0);
      prev = c;
    }
    // Equal to 1 in double precision far out.
    const double far = coth_p(ctx, 50.0);
    EXPECT_GE(far, 1.0);
    EXPECT_LT(far, 1.0 + 1e-6);
    EXPECT_THROW(coth_p(ctx, 0.0), pole_error);
  }
}

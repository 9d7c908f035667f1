#pragma once

// Named invariant suites run by `plyap verify`. Each returns one Check per
// property with the worst residual observed; tolerances are fixed here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "plyap/cli/record.hpp"
#include "plyap/detail/numeric.hpp"
#include "plyap/lyapunov.hpp"
#include "plyap/ptrig.hpp"
#include "plyap/shooting.hpp"

namespace plyap::cli {

enum class Suite { identities, integrals, ivp, reduction };

inline const char* to_string(Suite s) {
  switch (s) {
    case Suite::identities: return "identities";
    case Suite::integrals: return "integrals";
    case Suite::ivp: return "ivp";
    case Suite::reduction: return "reduction";
  }
  return "unknown";
}

namespace detail {

/// Tracks the largest residual of one property.
class Worst {
 public:
  Worst(std::string name, double tolerance) : name_(std::move(name)), tol_(tolerance) {}
  void operator()(double residual) {
    if (std::isnan(residual)) {
      nan_ = true;
    } else {
      worst_ = std::max(worst_, residual);
    }
  }
  Check check() const {
    const double r = nan_ ? std::nan("") : worst_;
    return {name_, r, tol_, !nan_ && worst_ <= tol_};
  }

 private:
  std::string name_;
  double tol_;
  double worst_ = 0.0;
  bool nan_ = false;
};

/// Adaptive Gauss-Kronrod over [a, b], split at the given interior points.
inline double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                                std::vector<double> cuts = {}) {
  std::vector<double> pts{a};
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, 1e-12);
  }
  return total;
}

}  // namespace detail

/// p-Pythagorean and hyperbolic identities, derivative, round-trip and
/// symmetry checks at the context's p.
inline std::vector<Check> identities_suite(const ExponentContext& ctx) {
  const double p = ctx.p();
  const double P = ctx.pi_p();
  constexpr int kPoints = 1000;

  detail::Worst pyth("p_pythagorean", 1e-12);
  for (int i = 0; i < kPoints; ++i) {
    const double x = -2.0 * P + 4.0 * P * (i + 0.5) / kPoints;
    const SinCos sc = sincos_p(ctx, x);
    pyth(std::abs(std::pow(std::abs(sc.cos), p) + std::pow(std::abs(sc.sin), p) - 1.0));
  }

  // Relative to cosh^p: both terms grow like e^{p|x|}.
  detail::Worst hyp("hyperbolic_identity", 1e-11);
  for (int i = 0; i < kPoints; ++i) {
    const double x = -10.0 + 20.0 * (i + 0.5) / kPoints;
    const SinhCosh sc = sinhcosh_p(ctx, x);
    const double cp = std::pow(sc.cosh, p);
    hyp(std::abs(cp - std::pow(std::abs(sc.sinh), p) - 1.0) / cp);
  }

  // sin_p'' is unbounded at the quarter points for p > 2 and at the zeros
  // for p < 2. The half-offset grid stays pi_p / 200 away from both, far
  // outside the difference stencil.
  constexpr double kStep = 1e-5;
  detail::Worst dsin("sin_p_derivative", 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double x = 2.0 * P * (i + 0.5) / 200;
    const double fd = (sin_p(ctx, x + kStep) - sin_p(ctx, x - kStep)) / (2.0 * kStep);
    dsin(std::abs(fd - cos_p(ctx, x)));
  }
  detail::Worst dsinh("sinh_p_derivative", 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double x = -5.0 + 10.0 * (i + 0.5) / 200;
    const double fd = (sinh_p(ctx, x + kStep) - sinh_p(ctx, x - kStep)) / (2.0 * kStep);
    const double c = cosh_p(ctx, x);
    dsinh(std::abs(fd - c) / c);
  }

  // arcsin_p has infinite slope at 1, so sin_p -> arcsin_p is checked only
  // where cos_p is not tiny; the reverse direction covers the rest.
  detail::Worst rt_sin("arcsin_sin_round_trip", 1e-9);
  detail::Worst rt_asin("sin_arcsin_round_trip", 1e-12);
  for (int i = 0; i <= kPoints; ++i) {
    const double x = 0.5 * P * i / kPoints;
    const SinCos sc = sincos_p(ctx, x);
    if (sc.cos >= 1e-6) rt_sin(std::abs(arcsin_p(ctx, sc.sin) - x));
    const double s = static_cast<double>(i) / kPoints;
    rt_asin(std::abs(sin_p(ctx, arcsin_p(ctx, s)) - s));
  }
  detail::Worst rt_sinh("arcsinh_sinh_round_trip", 1e-9);
  for (int i = 0; i <= kPoints; ++i) {
    const double x = 20.0 * i / kPoints;
    rt_sinh(std::abs(arcsinh_p(ctx, sinh_p(ctx, x)) - x));
  }

  detail::Worst sym("sin_p_symmetries", 1e-12);
  for (int i = 0; i < kPoints; ++i) {
    const double x = P * (i + 0.5) / kPoints;
    const double s = sin_p(ctx, x);
    sym(std::abs(sin_p(ctx, P - x) - s));
    sym(std::abs(sin_p(ctx, -x) + s));
    sym(std::abs(sin_p(ctx, x + 2.0 * P) - s));
  }

  return {pyth.check(),    hyp.check(),     dsin.check(),    dsinh.check(),
          rt_sin.check(),  rt_asin.check(), rt_sinh.check(), sym.check()};
}

/// Closed-form integrals of |cos_p|^p, |sin_p|^p, cosh_p^p, |sinh_p|^p
/// against adaptive quadrature at 100 random z, plus their sum/difference
/// identities.
inline std::vector<Check> integrals_suite(const ExponentContext& ctx, std::uint64_t seed) {
  const double p = ctx.p();
  const double P = ctx.pi_p();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> trig_z(0.0, 2.0 * P);
  std::uniform_real_distribution<double> hyp_z(0.0, 3.0);
  // The integrands are only Hoelder at multiples of pi_p / 2.
  const std::vector<double> quarter{0.5 * P, P, 1.5 * P};

  detail::Worst icos("int_cos_p_pow_vs_quadrature", 1e-9);
  detail::Worst isin("int_sin_p_pow_vs_quadrature", 1e-9);
  detail::Worst icosh("int_cosh_p_pow_vs_quadrature", 1e-9);
  detail::Worst isinh("int_sinh_p_pow_vs_quadrature", 1e-9);
  detail::Worst sum("trig_sum_identity", 1e-10);
  detail::Worst diff("hyperbolic_difference_identity", 1e-10);
  for (int i = 0; i < 100; ++i) {
    const double z = trig_z(rng);
    const double c = int_cos_p_pow(ctx, z);
    const double s = int_sin_p_pow(ctx, z);
    icos(std::abs(c - detail::adaptive_integral(
                          [&](double t) { return std::pow(std::abs(cos_p(ctx, t)), p); }, 0.0, z, quarter)));
    isin(std::abs(s - detail::adaptive_integral(
                          [&](double t) { return std::pow(std::abs(sin_p(ctx, t)), p); }, 0.0, z, quarter)));
    sum(std::abs(c + s - z));

    const double w = hyp_z(rng);
    const double ch = int_cosh_p_pow(ctx, w);
    const double sh = int_sinh_p_pow(ctx, w);
    icosh(std::abs(ch - detail::adaptive_integral([&](double t) { return std::pow(cosh_p(ctx, t), p); }, 0.0, w)));
    isinh(std::abs(sh - detail::adaptive_integral(
                            [&](double t) { return std::pow(std::abs(sinh_p(ctx, t)), p); }, 0.0, w)));
    diff(std::abs(ch - sh - w));
  }
  return {icos.check(), isin.check(), icosh.check(), isinh.check(), sum.check(), diff.check()};
}

/// Shooting at lambda = +-lambda_1 with r = 0 against sin_p / sinh_p.
inline std::vector<Check> ivp_suite(const ExponentContext& ctx, int steps) {
  const double p = ctx.p();
  const double q = ctx.q();
  const double l1 = ctx.lambda1();
  const PotentialSpec zero = PotentialSpec::zero();

  detail::Worst dev_sin("sin_p_trajectory_deviation", 1e-6);
  detail::Worst energy("trajectory_p_pythagorean", 1e-8);
  const auto up = integrate_ivp(ctx, l1, zero, steps);
  for (const ShootingState& s : up) {
    dev_sin(std::abs(s.u - sin_p(ctx, s.x)));
    energy(std::abs(std::pow(std::abs(s.v), q) + std::pow(std::abs(s.u), p) - 1.0));
  }

  detail::Worst dev_sinh("sinh_p_trajectory_relative_deviation", 1e-6);
  const auto down = integrate_ivp(ctx, -l1, zero, steps);
  for (const ShootingState& s : down) {
    const double ref = sinh_p(ctx, s.x);
    dev_sinh(std::abs(s.u - ref) / std::max(1.0, std::abs(ref)));
  }

  // u(pi_p) errors at 200 and 400 steps; fourth order gives a ratio near 16.
  const double end_sinh = sinh_p(ctx, ctx.pi_p());
  auto err = [&](double lambda, int n) {
    const double exact = lambda > 0.0 ? 0.0 : end_sinh;
    return std::abs(miss_distance(ctx, lambda, zero, n) - exact);
  };
  double ratio = std::numeric_limits<double>::infinity();
  for (double lambda : {l1, -l1}) ratio = std::min(ratio, err(lambda, 200) / err(lambda, 400));
  const Check halving{"step_halving_ratio_min", ratio, 8.0, ratio >= 8.0 && ratio <= 32.0};

  // v(0) = s scales u by s^{q-1}.
  detail::Worst homog("momentum_homogeneity", 1e-9);
  ShootingOptions scaled;
  scaled.initial_momentum = 2.0;
  const auto big = integrate_ivp(ctx, l1, zero, steps, scaled);
  const double factor = std::pow(2.0, q - 1.0);
  for (std::size_t i = 0; i < big.size(); ++i) homog(std::abs(big[i].u - factor * up[i].u) / factor);

  return {dev_sin.check(), energy.check(), dev_sinh.check(), halving, homog.check()};
}

/// At p = 2 every function and constant against its classical counterpart.
inline std::vector<Check> reduction_suite() {
  const ExponentContext ctx(2.0);
  constexpr double pi = std::numbers::pi;
  constexpr int kPoints = 100;

  detail::Worst pi_check("pi_2_equals_pi", 1e-10);
  pi_check(std::abs(ctx.pi_p() - pi));
  detail::Worst trig("trig_functions_classical", 1e-10);
  detail::Worst hyp("hyperbolic_functions_classical", 1e-10);
  for (int i = 0; i < kPoints; ++i) {
    const double t = (i + 0.5) / kPoints;
    const double x = -2.0 * pi + 4.0 * pi * t;
    trig(std::abs(sin_p(ctx, x) - std::sin(x)));
    trig(std::abs(cos_p(ctx, x) - std::cos(x)));
    const double y = pi * (0.01 + 0.98 * t);  // away from the poles of cot
    trig(std::abs(cot_p(ctx, y) - std::cos(y) / std::sin(y)));
    trig(std::abs(arcsin_p(ctx, t) - std::asin(t)));

    const double h = -5.0 + 10.0 * t;
    const double sh = std::sinh(h);
    const double ch = std::cosh(h);
    hyp(std::abs(sinh_p(ctx, h) - sh) / std::max(1.0, std::abs(sh)));
    hyp(std::abs(cosh_p(ctx, h) - ch) / ch);
    hyp(std::abs(coth_p(ctx, h) - ch / sh) / std::abs(ch / sh));
    hyp(std::abs(arcsinh_p(ctx, 10.0 * t) - std::asinh(10.0 * t)));
  }

  detail::Worst constants("lyapunov_constants_classical", 1e-10);
  for (double lambda : {-4.0, -1.0, 0.0, 0.25, 0.81}) {
    const double c = lyapunov_constant(ctx, SpectralShift(ctx, lambda)).value;
    double classical = 4.0 / pi;
    if (lambda > 0.0) classical = 2.0 * std::sqrt(lambda) / std::tan(std::sqrt(lambda) * pi / 2.0);
    if (lambda < 0.0) classical = 2.0 * std::sqrt(-lambda) / std::tanh(std::sqrt(-lambda) * pi / 2.0);
    constants(std::abs(c - classical) / classical);
  }

  detail::Worst f_zero("F_zero_branch_classical", 1e-10);
  const SpectralShift zero(ctx, 0.0);
  for (int i = 0; i < kPoints; ++i) {
    const double y = 0.5 * pi * (i + 1.0) / kPoints;
    const double classical = 1.0 / y + 1.0 / (pi - y);
    f_zero(std::abs(F_closed(ctx, zero, y) - classical) / classical);
  }

  return {pi_check.check(), trig.check(), hyp.check(), constants.check(), f_zero.check()};
}

}  // namespace plyap::cli

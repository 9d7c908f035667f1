#pragma once

// Generalized trigonometric and hyperbolic functions of one exponent p > 1.
//
//   arcsin_p(x)  = int_0^x (1 - t^p)^(-1/p) dt,   sin_p  its inverse on [0, pi_p/2]
//   arcsinh_p(x) = int_0^x (1 + t^p)^(-1/p) dt,   sinh_p its inverse on [0, inf)
//   cos_p = sin_p',  cosh_p = sinh_p',  cot_p = cos_p/sin_p,  coth_p = cosh_p/sinh_p
//
// Evaluation never touches a singular integrand. Both defining integrals are
// split at t^p = 1/2 and each half is rewritten as a power series whose ratio
// is bounded by 1/2:
//
//   * near 0 the binomial series of (1 -+ t^p)^(-1/p) in t^p;
//   * near 1 for arcsin_p, the substitution 1 - t^p = tau^q (q the conjugate
//     exponent) turns the endpoint singularity into (1 - tau^q)^(1/p - 1),
//     again a binomial series, and gives cos_p = tau^(1/(p-1)) exactly;
//   * for arcsinh_p beyond 1, w = t^p/(1+t^p) gives a log term plus a series
//     in 1/(1 + x^p), which isolates the constant
//     beta_p = lim (arcsinh_p(x) - ln x).
//
// Inverses use safeguarded Newton on a bracket. All functions are pure.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "plyap/errors.hpp"

namespace plyap {

enum class Accuracy {
  standard,  // ~1e-15 series truncation, ~4 ulp Newton termination
  fast,      // ~1e-10, for parameter sweeps
};

/// pi_p = 2 pi / (p sin(pi/p)), the half period of sin_p.
inline double pi_p(double p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw domain_error("pi_p: exponent must be finite and > 1, got " + std::to_string(p));
  }
  return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

namespace detail {

// sum_{k>=0} (a)_k/k! z^k / (k e + 1), z in [0, 1/2].
inline double binomial_power_series(double a, double e, double z, double tol) {
  double coeff = 1.0;
  double zk = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 2000; ++k) {
    coeff *= (k + a) / (k + 1);
    zk *= z;
    const double term = coeff * zk / ((k + 1) * e + 1.0);
    sum += term;
    if (term <= tol * sum) break;
  }
  return sum;
}

// sum_{k>=0} z^k / (k e + 1), z in [0, 1/2].
inline double geometric_power_series(double e, double z, double tol) {
  double zk = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 2000; ++k) {
    zk *= z;
    const double term = zk / (k * e + 1.0);
    sum += term;
    if (term <= tol * sum) break;
  }
  return sum;
}

// sum_{k>=1} (a)_k/k! z^k / k, z in [0, 1/2].
inline double binomial_log_series(double a, double z, double tol) {
  double coeff = 1.0;
  double zk = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 2000; ++k) {
    coeff *= (k - 1 + a) / k;
    zk *= z;
    const double term = coeff * zk / k;
    sum += term;
    if (term <= tol * sum) break;
  }
  return sum;
}

// Solves f(t) = target for increasing f on [lo, hi] with derivative df.
template <class F, class DF>
double solve_increasing(F&& f, DF&& df, double target, double lo, double hi, double guess,
                        double tol) {
  double t = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = f(t) - target;
    if (r == 0.0) return t;
    if (r > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    double next = t - r / df(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double scale = std::max(std::abs(next), std::numeric_limits<double>::min());
    if (std::abs(next - t) <= tol * scale || hi - lo <= tol * scale) return next;
    t = next;
  }
  return t;
}

}  // namespace detail

/// The exponent p with its derived constants. Immutable; cheap to copy.
class ExponentContext {
 public:
  explicit ExponentContext(double p, Accuracy accuracy = Accuracy::standard)
      : p_(p), accuracy_(accuracy) {
    if (!std::isfinite(p) || !(p > 1.0 + 1e-8)) {
      throw domain_error("ExponentContext: exponent must be finite and > 1 + 1e-8, got " +
                         std::to_string(p));
    }
    q_ = p / (p - 1.0);
    lambda1_ = p - 1.0;
    pi_p_ = plyap::pi_p(p);
    series_tol_ = accuracy == Accuracy::standard ? 1e-17 : 1e-11;
    newton_tol_ = accuracy == Accuracy::standard ? 4.0 * std::numeric_limits<double>::epsilon()
                                                 : 1e-11;

    left_split_ = std::pow(0.5, 1.0 / p_);
    tau_split_ = std::pow(0.5, 1.0 / q_);
    arcsin_split_ = left_arcsin(left_split_);

    const double a = 1.0 - 1.0 / p_;
    arcsinh_one_ = left_arcsinh(1.0);
    asinh_offset_ =
        arcsinh_one_ + (-std::numbers::ln2 + detail::binomial_log_series(a, 0.5, series_tol_)) / p_;
  }

  double p() const { return p_; }
  /// Conjugate exponent, 1/p + 1/q = 1.
  double q() const { return q_; }
  /// First Dirichlet eigenvalue on (0, pi_p): p - 1.
  double lambda1() const { return lambda1_; }
  double pi_p() const { return pi_p_; }
  double half_pi_p() const { return 0.5 * pi_p_; }
  Accuracy accuracy() const { return accuracy_; }
  /// beta_p = lim_{x->inf} (arcsinh_p(x) - ln x).
  double asinh_offset() const { return asinh_offset_; }

  // Building blocks shared by the free functions below.

  // int_0^s (1 - t^p)^(-1/p) dt for s^p <= 1/2.
  double left_arcsin(double s) const {
    return s * detail::binomial_power_series(1.0 / p_, p_, std::pow(s, p_), series_tol_);
  }
  // pi_p/2 - arcsin_p((1 - tau^q)^(1/p)) for tau^q <= 1/2.
  double right_arcsin(double tau) const {
    return tau * detail::binomial_power_series(1.0 - 1.0 / p_, q_, std::pow(tau, q_), series_tol_) /
           (p_ - 1.0);
  }
  // arcsinh_p(x) for 0 <= x <= 1.
  double left_arcsinh(double x) const {
    const double xp = std::pow(x, p_);
    const double w = xp / (1.0 + xp);
    return x / std::pow(1.0 + xp, 1.0 / p_) * detail::geometric_power_series(p_, w, series_tol_);
  }
  // arcsinh_p(exp(log_x)) for log_x >= 0.
  double right_arcsinh_log(double log_x) const {
    const double inv_xp = std::exp(-p_ * log_x);
    const double omega = inv_xp / (1.0 + inv_xp);
    return asinh_offset_ + log_x +
           (std::log1p(inv_xp) - detail::binomial_log_series(1.0 - 1.0 / p_, omega, series_tol_)) /
               p_;
  }

  double left_split() const { return left_split_; }
  double tau_split() const { return tau_split_; }
  double arcsin_split() const { return arcsin_split_; }
  double arcsinh_one() const { return arcsinh_one_; }
  double newton_tol() const { return newton_tol_; }

 private:
  double p_;
  Accuracy accuracy_;
  double q_ = 0.0;
  double lambda1_ = 0.0;
  double pi_p_ = 0.0;
  double series_tol_ = 0.0;
  double newton_tol_ = 0.0;
  double left_split_ = 0.0;
  double tau_split_ = 0.0;
  double arcsin_split_ = 0.0;
  double arcsinh_one_ = 0.0;
  double asinh_offset_ = 0.0;
};

struct SinCos {
  double sin;
  double cos;
};

struct SinhCosh {
  double sinh;
  double cosh;
  /// (1 + |sinh|^-p)^(1/p) = |coth_p|, evaluated without cancellation.
  double abs_coth;
};

namespace detail {

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw domain_error(std::string(what) + ": argument must be finite");
}

// sin_p and cos_p on the fundamental quadrant [0, pi_p/2].
inline SinCos quadrant_sincos(const ExponentContext& ctx, double x) {
  const double p = ctx.p();
  if (x == 0.0) return {0.0, 1.0};
  if (x <= ctx.arcsin_split()) {
    const double guess = std::sin(x * std::numbers::pi / ctx.pi_p());
    const double s = solve_increasing(
        [&](double t) { return ctx.left_arcsin(t); },
        [&](double t) { return std::pow(1.0 - std::pow(t, p), -1.0 / p); }, x, 0.0,
        ctx.left_split(), guess, ctx.newton_tol());
    return {s, std::pow(1.0 - std::pow(s, p), 1.0 / p)};
  }
  const double d = std::max(ctx.half_pi_p() - x, 0.0);
  const double tau = solve_increasing(
      [&](double t) { return ctx.right_arcsin(t); },
      [&](double t) { return std::pow(1.0 - std::pow(t, ctx.q()), 1.0 / p - 1.0) / (p - 1.0); }, d,
      0.0, ctx.tau_split(), (p - 1.0) * d, ctx.newton_tol());
  return {std::pow(1.0 - std::pow(tau, ctx.q()), 1.0 / p), std::pow(tau, 1.0 / (p - 1.0))};
}

// sinh_p, cosh_p for x >= 0.
inline SinhCosh positive_sinhcosh(const ExponentContext& ctx, double x) {
  const double p = ctx.p();
  if (x == 0.0) return {0.0, 1.0, std::numeric_limits<double>::infinity()};
  if (x <= ctx.arcsinh_one()) {
    const double s = solve_increasing(
        [&](double t) { return ctx.left_arcsinh(t); },
        [&](double t) { return std::pow(1.0 + std::pow(t, p), -1.0 / p); }, x, 0.0, 1.0, x,
        ctx.newton_tol());
    const double sp = std::pow(s, p);
    return {s, std::pow(1.0 + sp, 1.0 / p), std::pow(1.0 + 1.0 / sp, 1.0 / p)};
  }
  const double lo = std::max(0.0, x - ctx.arcsinh_one());
  const double hi = x - ctx.asinh_offset() + 1e-12 * (1.0 + x);
  const double log_s = solve_increasing(
      [&](double l) { return ctx.right_arcsinh_log(l); },
      [&](double l) { return std::pow(1.0 + std::exp(-p * l), -1.0 / p); }, x, lo, hi,
      x - ctx.asinh_offset(), ctx.newton_tol());
  const double s = std::exp(log_s);
  const double abs_coth = std::pow(1.0 + std::exp(-p * log_s), 1.0 / p);
  return {s, s * abs_coth, abs_coth};
}

}  // namespace detail

/// arcsin_p(x) for x in [0, 1].
inline double arcsin_p(const ExponentContext& ctx, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw domain_error("arcsin_p: argument must lie in [0, 1], got " + std::to_string(x));
  }
  const double p = ctx.p();
  if (x <= ctx.left_split()) return ctx.left_arcsin(x);
  // 1 - x^p without cancellation
  const double w = -std::expm1(p * std::log(x));
  return ctx.half_pi_p() - ctx.right_arcsin(std::pow(w, 1.0 / ctx.q()));
}

/// sin_p and cos_p together; cos_p carries the sign of the derivative of sin_p.
inline SinCos sincos_p(const ExponentContext& ctx, double x) {
  detail::require_finite(x, "sin_p");
  const double r = std::remainder(x, 2.0 * ctx.pi_p());
  const double a = std::abs(r);
  SinCos sc = a <= ctx.half_pi_p() ? detail::quadrant_sincos(ctx, a)
                                   : detail::quadrant_sincos(ctx, ctx.pi_p() - a);
  if (a > ctx.half_pi_p()) sc.cos = -sc.cos;
  if (r < 0.0) sc.sin = -sc.sin;
  return sc;
}

inline double sin_p(const ExponentContext& ctx, double x) { return sincos_p(ctx, x).sin; }

inline double cos_p(const ExponentContext& ctx, double x) { return sincos_p(ctx, x).cos; }

inline double cot_p(const ExponentContext& ctx, double x) {
  const SinCos sc = sincos_p(ctx, x);
  if (sc.sin == 0.0) throw pole_error("cot_p: pole at an integer multiple of pi_p");
  return sc.cos / sc.sin;
}

/// arcsinh_p(x) for x >= 0.
inline double arcsinh_p(const ExponentContext& ctx, double x) {
  if (!(x >= 0.0)) {
    throw domain_error("arcsinh_p: argument must be >= 0, got " + std::to_string(x));
  }
  if (std::isinf(x)) return x;
  if (x <= 1.0) return ctx.left_arcsinh(x);
  return ctx.right_arcsinh_log(std::log(x));
}

inline SinhCosh sinhcosh_p(const ExponentContext& ctx, double x) {
  detail::require_finite(x, "sinh_p");
  SinhCosh r = detail::positive_sinhcosh(ctx, std::abs(x));
  if (x < 0.0) r.sinh = -r.sinh;
  return r;
}

inline double sinh_p(const ExponentContext& ctx, double x) { return sinhcosh_p(ctx, x).sinh; }

inline double cosh_p(const ExponentContext& ctx, double x) { return sinhcosh_p(ctx, x).cosh; }

inline double coth_p(const ExponentContext& ctx, double x) {
  detail::require_finite(x, "coth_p");
  if (x == 0.0) throw pole_error("coth_p: pole at 0");
  const SinhCosh r = sinhcosh_p(ctx, x);
  return x < 0.0 ? -r.abs_coth : r.abs_coth;
}

}  // namespace plyap

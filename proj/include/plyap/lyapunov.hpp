#pragma once

// Sharp constants C(p, lambda) for
//
//   (|u'|^{p-2} u')' + (lambda + r(x)) |u|^{p-2} u = 0 on (0, pi_p),  u(0) = u(pi_p) = 0,
//
// i.e. the threshold ||r_+||_1 > C(p, lambda) necessary for a nontrivial
// solution, together with the pinned-problem value F(y), its minimizers u_y
// and the integral identities behind them. Each quantity has three branches
// (0 < lambda < lambda_1, lambda = 0, lambda < 0) selected by SpectralShift.

#include <cmath>
#include <cstddef>
#include <string>

#include "plyap/detail/numeric.hpp"
#include "plyap/discrete.hpp"
#include "plyap/errors.hpp"
#include "plyap/ptrig.hpp"

namespace plyap {

enum class Branch {
  positive_subcritical,  // 0 < lambda < lambda_1, trigonometric
  zero,                  // lambda == 0, piecewise linear
  negative,              // lambda < 0, hyperbolic
};

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::positive_subcritical: return "positive_subcritical";
    case Branch::zero: return "zero";
    case Branch::negative: return "negative";
  }
  return "unknown";
}

/// lambda < lambda_1 with its branch and K = (|lambda| / lambda_1)^(1/p).
/// Only an exact zero selects Branch::zero.
class SpectralShift {
 public:
  SpectralShift(const ExponentContext& ctx, double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda) || !(lambda < ctx.lambda1())) {
      throw domain_error("SpectralShift: lambda must be finite and < lambda_1 = " +
                         std::to_string(ctx.lambda1()) + ", got " + std::to_string(lambda));
    }
    if (lambda > 0.0) {
      branch_ = Branch::positive_subcritical;
    } else if (lambda < 0.0) {
      branch_ = Branch::negative;
    } else {
      branch_ = Branch::zero;
    }
    K_ = lambda == 0.0 ? 0.0 : std::pow(std::abs(lambda) / ctx.lambda1(), 1.0 / ctx.p());
  }

  double lambda() const { return lambda_; }
  Branch branch() const { return branch_; }
  double K() const { return K_; }
  double lambda_plus() const { return lambda_ > 0.0 ? lambda_ : 0.0; }
  double lambda_minus() const { return lambda_ < 0.0 ? lambda_ : 0.0; }

 private:
  double lambda_;
  Branch branch_ = Branch::zero;
  double K_ = 0.0;
};

struct LyapunovConstant {
  double value;
  double p;
  double lambda;
};

/// C(p, lambda).
inline LyapunovConstant lyapunov_constant(const ExponentContext& ctx, const SpectralShift& shift) {
  const double p = ctx.p();
  const double K = shift.K();
  double value = 0.0;
  switch (shift.branch()) {
    case Branch::positive_subcritical:
      value = 2.0 * std::pow(K, p - 1.0) * std::pow(cot_p(ctx, K * ctx.half_pi_p()), p - 1.0);
      break;
    case Branch::zero:
      value = std::pow(2.0, p) / std::pow(ctx.pi_p(), p - 1.0);
      break;
    case Branch::negative:
      value = 2.0 * std::pow(K, p - 1.0) * std::pow(coth_p(ctx, K * ctx.half_pi_p()), p - 1.0);
      break;
  }
  return {value, p, shift.lambda()};
}

namespace detail {

inline void require_pin(const ExponentContext& ctx, double y, const char* what) {
  if (!(y > 0.0 && y <= ctx.half_pi_p())) {
    throw domain_error(std::string(what) + ": y must lie in (0, pi_p/2], got " + std::to_string(y));
  }
}

}  // namespace detail

/// F(y) = min { J(u) : u in W^{1,p}_0, u(y) = 1 } in closed form.
inline double F_closed(const ExponentContext& ctx, const SpectralShift& shift, double y) {
  detail::require_pin(ctx, y, "F_closed");
  const double p = ctx.p();
  const double K = shift.K();
  const double rest = ctx.pi_p() - y;
  switch (shift.branch()) {
    case Branch::positive_subcritical:
      return std::pow(K, p - 1.0) * (std::pow(cot_p(ctx, K * y), p - 1.0) +
                                     detail::signed_pow(cot_p(ctx, K * rest), p - 1.0));
    case Branch::zero:
      return std::pow(y, 1.0 - p) + std::pow(rest, 1.0 - p);
    case Branch::negative:
      return std::pow(K, p - 1.0) *
             (std::pow(coth_p(ctx, K * y), p - 1.0) + std::pow(coth_p(ctx, K * rest), p - 1.0));
  }
  return 0.0;
}

/// The pinned minimizer u_y evaluated at x; u_y(0) = u_y(pi_p) = 0, u_y(y) = 1.
inline double minimizer_profile(const ExponentContext& ctx, const SpectralShift& shift, double y,
                                double x) {
  detail::require_pin(ctx, y, "minimizer_profile");
  if (!(x >= 0.0 && x <= ctx.pi_p())) {
    throw domain_error("minimizer_profile: x must lie in [0, pi_p], got " + std::to_string(x));
  }
  const double K = shift.K();
  const bool left = x < y;
  const double num = left ? x : ctx.pi_p() - x;
  const double den = left ? y : ctx.pi_p() - y;
  switch (shift.branch()) {
    case Branch::positive_subcritical:
      return sin_p(ctx, K * num) / sin_p(ctx, K * den);
    case Branch::zero:
      return num / den;
    case Branch::negative:
      return sinh_p(ctx, K * num) / sinh_p(ctx, K * den);
  }
  return 0.0;
}

/// int_0^z |cos_p t|^p dt.
inline double int_cos_p_pow(const ExponentContext& ctx, double z) {
  const double p = ctx.p();
  const SinCos sc = sincos_p(ctx, z);
  return ((p - 1.0) * z + detail::signed_pow(sc.cos, p - 1.0) * sc.sin) / p;
}

/// int_0^z |sin_p t|^p dt.
inline double int_sin_p_pow(const ExponentContext& ctx, double z) {
  const double p = ctx.p();
  const SinCos sc = sincos_p(ctx, z);
  return (z - detail::signed_pow(sc.cos, p - 1.0) * sc.sin) / p;
}

/// int_0^z (cosh_p t)^p dt.
inline double int_cosh_p_pow(const ExponentContext& ctx, double z) {
  const double p = ctx.p();
  const SinhCosh sc = sinhcosh_p(ctx, z);
  return ((p - 1.0) * z + std::pow(sc.cosh, p - 1.0) * sc.sinh) / p;
}

/// int_0^z |sinh_p t|^p dt.
inline double int_sinh_p_pow(const ExponentContext& ctx, double z) {
  const double p = ctx.p();
  const SinhCosh sc = sinhcosh_p(ctx, z);
  return (-z + std::pow(sc.cosh, p - 1.0) * sc.sinh) / p;
}

namespace detail {

inline void require_cot_profile(const ExponentContext& ctx, const SpectralShift& shift, double x,
                                const char* what) {
  if (shift.branch() != Branch::positive_subcritical) {
    throw domain_error(std::string(what) + ": defined only for 0 < lambda < lambda_1");
  }
  const double end = ctx.pi_p() / shift.K();
  if (!(x >= 0.0 && x <= end)) {
    throw domain_error(std::string(what) + ": x must lie in (0, pi_p/K)");
  }
  if (x == 0.0 || x == end) throw pole_error(std::string(what) + ": pole at interval end");
}

}  // namespace detail

/// f(x) = K^{p-1} |cot_p Kx|^{p-2} cot_p Kx on (0, pi_p/K); F(y) = f(y) + f(pi_p - y).
inline double cot_power_profile(const ExponentContext& ctx, const SpectralShift& shift, double x) {
  detail::require_cot_profile(ctx, shift, x, "cot_power_profile");
  const double p = ctx.p();
  const double K = shift.K();
  return std::pow(K, p - 1.0) * detail::signed_pow(cot_p(ctx, K * x), p - 1.0);
}

/// f'(x) = -(p-1) K^p / (sin_p Kx)^p.
inline double cot_power_profile_derivative(const ExponentContext& ctx, const SpectralShift& shift,
                                           double x) {
  detail::require_cot_profile(ctx, shift, x, "cot_power_profile_derivative");
  const double p = ctx.p();
  const double K = shift.K();
  return -(p - 1.0) * std::pow(K, p) / detail::abs_pow(sin_p(ctx, K * x), p);
}

struct SobolevGap {
  double gap;        // J(u) - C(p, lambda) max|u|^p
  double slack;      // discretization allowance: gap >= -slack
  double energy;     // J(u)
  double constant;   // C(p, lambda)
};

/// J(u) - C(p, lambda) (max |u|)^p for a discrete u != 0. Nonnegative in the
/// continuum; on the mesh it may dip below zero by at most slack = 10 / n.
inline SobolevGap sobolev_gap(const ExponentContext& ctx, const SpectralShift& shift,
                              const DiscreteFunction& u) {
  const double peak = u.max_abs();
  if (peak == 0.0) throw domain_error("sobolev_gap: u is identically zero");
  const double j = energy(ctx.p(), shift.lambda(), u.mesh(), u.values());
  const double c = lyapunov_constant(ctx, shift).value;
  return {j - c * std::pow(peak, ctx.p()), 10.0 / static_cast<double>(u.mesh().cells()), j, c};
}

}  // namespace plyap

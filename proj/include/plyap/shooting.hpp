#pragma once

// Initial-value integration of
//
//   (|u'|^{p-2} u')' + (lambda + r(x)) |u|^{p-2} u = 0,  u(0) = 0,
//
// as the first-order system in (u, v), v = |u'|^{p-2} u':
//
//   u' = |v|^{q-2} v,   v' = -(lambda + r(x)) |u|^{p-2} u,
//
// with classical fixed-step RK4 over [0, pi_p]. The system is p-homogeneous,
// so the terminal value of the shot with v(0) = 1 (the miss distance) vanishes
// exactly when the boundary problem has a nontrivial solution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

#include "plyap/detail/numeric.hpp"
#include "plyap/discrete.hpp"
#include "plyap/errors.hpp"
#include "plyap/lyapunov.hpp"
#include "plyap/ptrig.hpp"

namespace plyap {

struct ShootingState {
  double x;
  double u;
  double v;  // |u'|^{p-2} u'
};

/// The potential r(x) on [0, pi_p].
class PotentialSpec {
 public:
  struct Zero {};
  struct Constant {
    double value;
  };
  struct Tent {
    TentProfile profile;
    double amplitude;
  };
  struct Tabulated {
    Mesh mesh;
    std::vector<double> values;
  };

  static PotentialSpec zero() { return PotentialSpec(Zero{}); }

  static PotentialSpec constant(double value) {
    if (!std::isfinite(value)) throw domain_error("PotentialSpec: constant must be finite");
    return PotentialSpec(Constant{value});
  }

  static PotentialSpec tent(const TentProfile& profile, double amplitude) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
      throw domain_error("PotentialSpec: tent amplitude must be finite and >= 0");
    }
    return PotentialSpec(Tent{profile, amplitude});
  }

  static PotentialSpec tabulated(const Mesh& mesh, std::vector<double> values) {
    if (values.size() != mesh.size()) {
      throw domain_error("PotentialSpec: tabulated potential needs one value per mesh node");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw domain_error("PotentialSpec: tabulated values must be finite");
    }
    return PotentialSpec(Tabulated{mesh, std::move(values)});
  }

  const std::variant<Zero, Constant, Tent, Tabulated>& kind() const { return kind_; }

  double operator()(double x) const {
    return std::visit(
        [x](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Zero>) {
            return 0.0;
          } else if constexpr (std::is_same_v<K, Constant>) {
            return k.value;
          } else if constexpr (std::is_same_v<K, Tent>) {
            return k.amplitude * k.profile(x);
          } else {
            const std::size_t c = k.mesh.cell_of(x);
            const double t = std::clamp((x - k.mesh.node(c)) / k.mesh.h(), 0.0, 1.0);
            return (1.0 - t) * k.values[c] + t * k.values[c + 1];
          }
        },
        kind_);
  }

  /// Sorted points where r fails to be smooth.
  std::vector<double> breakpoints() const {
    if (const auto* t = std::get_if<Tent>(&kind_)) {
      return {t->profile.left(), t->profile.center(), t->profile.right()};
    }
    if (const auto* t = std::get_if<Tabulated>(&kind_)) {
      return {t->mesh.nodes().begin(), t->mesh.nodes().end()};
    }
    return {};
  }

  /// ||r_+||_1 over [0, length].
  double positive_mass(double length) const {
    return std::visit(
        [length](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Zero>) {
            return 0.0;
          } else if constexpr (std::is_same_v<K, Constant>) {
            return std::max(k.value, 0.0) * length;
          } else if constexpr (std::is_same_v<K, Tent>) {
            return k.amplitude;
          } else {
            // Exact for the piecewise-linear interpolant.
            double mass = 0.0;
            const double h = k.mesh.h();
            for (std::size_t i = 0; i + 1 < k.values.size(); ++i) {
              const double a = k.values[i];
              const double b = k.values[i + 1];
              if (a >= 0.0 && b >= 0.0) {
                mass += 0.5 * h * (a + b);
              } else if (a > 0.0 || b > 0.0) {
                const double top = std::max(a, b);
                mass += 0.5 * h * top * top / (std::abs(a) + std::abs(b));
              }
            }
            return mass;
          }
        },
        kind_);
  }

 private:
  explicit PotentialSpec(std::variant<Zero, Constant, Tent, Tabulated> k) : kind_(std::move(k)) {}
  std::variant<Zero, Constant, Tent, Tabulated> kind_;
};

struct ShootingOptions {
  double initial_momentum = 1.0;  // v(0)
  double bound = 1e150;           // overflow_error once |u| or |v| exceeds this
};

namespace detail {

struct Phase {
  double u;
  double v;
};

class ShootingField {
 public:
  ShootingField(const ExponentContext& ctx, double lambda, const PotentialSpec& r)
      : p_(ctx.p()), q_(ctx.q()), lambda_(lambda), r_(r) {}

  Phase operator()(double x, Phase y) const {
    return {signed_pow(y.v, q_ - 1.0), -(lambda_ + r_(x)) * signed_pow(y.u, p_ - 1.0)};
  }

 private:
  double p_;
  double q_;
  double lambda_;
  const PotentialSpec& r_;
};

inline Phase rk4_step(const ShootingField& f, double x, Phase y, double h) {
  const Phase k1 = f(x, y);
  const Phase k2 = f(x + 0.5 * h, {y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v});
  const Phase k3 = f(x + 0.5 * h, {y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v});
  const Phase k4 = f(x + h, {y.u + h * k3.u, y.v + h * k3.v});
  return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

// The right side is only Hoelder where u = 0 (exponent p) or v = 0 (exponent
// q), and so is the solution: near such a zero x_s it behaves like
// |x - x_s|^e. Uniform RK4 steps then lose order (the step-halving ratio drops
// to 2^(1+e)). Within each output step the stepper therefore takes substeps
// of size h * min(1, d^((5-e)/4)), d the distance to the nearest zero, which
// keeps the accumulated error O(h^4). Away from zeros it is plain RK4.
class GradedStepper {
 public:
  GradedStepper(const ExponentContext& ctx, const ShootingField& f, double h, double length)
      : f_(f), h_(h) {
    kappa_[0] = grading_exponent(ctx.p());
    kappa_[1] = grading_exponent(ctx.q());
    const double e = std::min(ctx.p(), ctx.q());
    floor_ = std::max(std::pow(h, 4.0 / e), 1e-14 * length);
  }

  /// Advances (x0, y0) to x0 + h; a zero inside the step is located and
  /// stepped onto exactly.
  Phase advance(double x0, Phase y0, double h) {
    if (kappa_[0] == 0.0 && kappa_[1] == 0.0) return rk4_step(f_, x0, y0, h);
    const double x1 = x0 + h;
    std::vector<Zero> zeros = known_zeros(x0, y0);
    const Phase trial = march(x0, x1, y0, zeros);
    for (int c = 0; c < 2; ++c) {
      if (kappa_[c] == 0.0) continue;
      const double s0 = component(y0, c);
      const double s1 = component(trial, c);
      if ((s0 < 0.0 && s1 > 0.0) || (s0 > 0.0 && s1 < 0.0)) {
        const double xs = locate_zero(x0, y0, x1, c, s0, zeros);
        zeros.push_back({xs, kappa_[c]});
        last_ = zeros.back();
        const Phase mid = march(x0, xs, y0, zeros);
        return march(xs, x1, mid, zeros);
      }
    }
    return trial;
  }

  void mark_zero(double x, int component) { last_ = Zero{x, kappa_[component]}; }

 private:
  struct Zero {
    double x;
    double kappa;
  };

  static double grading_exponent(double e) { return e < 4.0 ? (5.0 - e) / 4.0 : 0.0; }
  static double component(Phase y, int c) { return c == 0 ? y.u : y.v; }

  // The last zero stepped over plus the zeros of u and v predicted linearly
  // from (x0, y0).
  std::vector<Zero> known_zeros(double x0, Phase y0) const {
    std::vector<Zero> zeros;
    if (last_) zeros.push_back(*last_);
    const Phase d = f_(x0, y0);
    for (int c = 0; c < 2; ++c) {
      const double t = -component(y0, c) / component(d, c);
      if (kappa_[c] != 0.0 && std::isfinite(t)) zeros.push_back({x0 + t, kappa_[c]});
    }
    return zeros;
  }

  double substep(double x, const std::vector<Zero>& zeros) const {
    double k = h_;
    for (const Zero& z : zeros) {
      const double d = std::abs(x - z.x);
      if (d < 1.0) k = std::min(k, h_ * std::pow(d, z.kappa));
    }
    return std::max(k, floor_);
  }

  Phase march(double a, double b, Phase y, const std::vector<Zero>& zeros) const {
    double x = a;
    while (x < b) {
      const double k = substep(x, zeros);
      const double next = b - x <= k * (1.0 + 1e-12) ? b : x + k;
      y = rk4_step(f_, x, y, next - x);
      x = next;
    }
    return y;
  }

  // Zero of component c in (x0, x1), bracketed by s0 and the opposite sign at
  // x1. The component is smooth across its own zero, so safeguarded Newton
  // converges in a few graded marches.
  double locate_zero(double x0, Phase y0, double x1, int c, double s0, const std::vector<Zero>& zeros) const {
    double lo = x0;
    double hi = x1;
    const Phase d0 = f_(x0, y0);
    double x = x0 - s0 / component(d0, c);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    std::vector<Zero> target = zeros;
    target.push_back({x, 0.0});
    for (int it = 0; it < 60; ++it) {
      target.back() = {x, std::max(kappa_[0], kappa_[1])};
      const Phase y = march(x0, x, y0, target);
      const double s = component(y, c);
      if (s == 0.0) return x;
      if ((s > 0.0) == (s0 > 0.0)) {
        lo = x;
      } else {
        hi = x;
      }
      const double newton = x - s / component(f_(x, y), c);
      const double next = (std::isfinite(newton) && newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
      if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x1) ||
          hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x1)) {
        return next;
      }
      x = next;
    }
    return 0.5 * (lo + hi);
  }

  const ShootingField& f_;
  double h_;
  double kappa_[2] = {0.0, 0.0};  // grading exponents at zeros of u and of v
  double floor_;
  std::optional<Zero> last_;
};

}  // namespace detail

/// RK4 trajectory from (0, 0, v0) to pi_p on a uniform grid; steps + 1
/// states. lambda is unrestricted here (lambda = lambda_1 included).
inline std::vector<ShootingState> integrate_ivp(const ExponentContext& ctx, double lambda,
                                                const PotentialSpec& potential, int steps,
                                                const ShootingOptions& opts = {}) {
  if (steps < 100) throw domain_error("integrate_ivp: steps must be >= 100, got " + std::to_string(steps));
  if (!std::isfinite(lambda)) throw domain_error("integrate_ivp: lambda must be finite");
  const double L = ctx.pi_p();
  const double h = L / steps;
  const detail::ShootingField field(ctx, lambda, potential);
  detail::GradedStepper stepper(ctx, field, h, L);
  const std::vector<double> kinks = potential.breakpoints();

  std::vector<ShootingState> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  detail::Phase y{0.0, opts.initial_momentum};
  traj.push_back({0.0, y.u, y.v});
  stepper.mark_zero(0.0, 0);
  auto kink = kinks.begin();
  for (int i = 0; i < steps; ++i) {
    const double x0 = L * i / steps;
    const double x1 = i + 1 == steps ? L : L * (i + 1) / steps;
    // r is smooth between its breakpoints; split the step at any inside it.
    double x = x0;
    while (kink != kinks.end() && *kink <= x0) ++kink;
    for (; kink != kinks.end() && *kink < x1; ++kink) {
      y = stepper.advance(x, y, *kink - x);
      x = *kink;
    }
    y = stepper.advance(x, y, x1 - x);
    if (!(std::abs(y.u) <= opts.bound) || !(std::abs(y.v) <= opts.bound)) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "integrate_ivp: solution exceeded %g at x = %g", opts.bound, x1);
      throw overflow_error(msg);
    }
    traj.push_back({x1, y.u, y.v});
  }
  return traj;
}

inline std::vector<ShootingState> integrate_ivp(const ExponentContext& ctx, const SpectralShift& shift,
                                                const PotentialSpec& potential, int steps,
                                                const ShootingOptions& opts = {}) {
  return integrate_ivp(ctx, shift.lambda(), potential, steps, opts);
}

/// u(pi_p) of the normalized shot u(0) = 0, v(0) = 1.
inline double miss_distance(const ExponentContext& ctx, double lambda, const PotentialSpec& potential,
                            int steps) {
  return integrate_ivp(ctx, lambda, potential, steps).back().u;
}

inline double miss_distance(const ExponentContext& ctx, const SpectralShift& shift,
                            const PotentialSpec& potential, int steps) {
  return miss_distance(ctx, shift.lambda(), potential, steps);
}

struct ThresholdEntry {
  double amplitude;
  double positive_mass;  // ||(a r_delta)_+||_1 = a
  double miss;
  bool solves;           // |miss| < tolerance
};

struct ThresholdReport {
  double constant;  // C(p, lambda)
  double tolerance;
  std::vector<ThresholdEntry> entries;
  bool contract_holds;  // every solving amplitude exceeds the constant
};

/// Shoots with r = a r_delta for each amplitude a (ascending). Shots run
/// concurrently; entries follow the input order.
inline ThresholdReport verify_lyapunov_threshold(const ExponentContext& ctx, const SpectralShift& shift,
                                                 const TentProfile& tent,
                                                 const std::vector<double>& amplitudes, int steps,
                                                 double tolerance = 1e-6) {
  if (!std::is_sorted(amplitudes.begin(), amplitudes.end())) {
    throw domain_error("verify_lyapunov_threshold: amplitudes must be sorted ascending");
  }
  std::vector<std::future<double>> shots;
  shots.reserve(amplitudes.size());
  for (double a : amplitudes) {
    const PotentialSpec r = PotentialSpec::tent(tent, a);
    shots.push_back(std::async(std::launch::async, [&ctx, &shift, r, steps] {
      return miss_distance(ctx, shift, r, steps);
    }));
  }
  ThresholdReport report{lyapunov_constant(ctx, shift).value, tolerance, {}, true};
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    const double miss = shots[i].get();
    const bool solves = std::abs(miss) < tolerance;
    report.entries.push_back({amplitudes[i], amplitudes[i], miss, solves});
    if (solves && !(amplitudes[i] > report.constant)) report.contract_holds = false;
  }
  return report;
}

}  // namespace plyap

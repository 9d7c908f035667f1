#pragma once

// Discrete variational problems on continuous P1 functions over [0, pi_p]:
//
//   * J(u) = int |u'|^p - lambda int |u|^p and its nodal gradient;
//   * min J over the pinned class u(y) = 1 (the relaxed problem);
//   * the minimum over a grid of pins, estimating C(p, lambda);
//   * the Rayleigh quotient int |u'|^p / int |u|^p (first eigenvalue);
//   * alpha(delta) = inf J(phi) / int r_delta |phi|^p (sharpness potentials).
//
// All of them run the same projected descent: the search direction is the
// gradient preconditioned by the tridiagonal Hessian of the energy terms,
// fixed nodes are held in place, and an Armijo backtracking line search
// accepts the step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plyap/detail/numeric.hpp"
#include "plyap/discrete.hpp"
#include "plyap/errors.hpp"
#include "plyap/lyapunov.hpp"
#include "plyap/ptrig.hpp"

namespace plyap {

struct DescentOptions {
  double tol = 1e-12;       // relative Newton-decrement threshold
  int max_iterations = 500;
  int restarts = 4;         // extra randomized starts when lambda > 0
  std::uint64_t seed = 0;
};

namespace detail {

struct DescentProblem {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::function<Tridiagonal(std::span<const double>)> preconditioner;
  std::function<Tridiagonal(std::span<const double>)> fallback_preconditioner;
  std::vector<bool> fixed;
  bool normalize_max = false;
};

struct DescentOutcome {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline void restrict_to_free(Tridiagonal& t, const std::vector<bool>& fixed) {
  double max_diag = 0.0;
  for (double d : t.diag) max_diag = std::max(max_diag, std::abs(d));
  const double shift = 1e-13 * (max_diag > 0.0 ? max_diag : 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (fixed[i]) {
      t.diag[i] = 1.0;
      if (i > 0) t.off[i - 1] = 0.0;
      if (i + 1 < t.size()) t.off[i] = 0.0;
    } else {
      t.diag[i] += shift;
    }
  }
}

inline void normalize_to_unit_max(std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0) {
    for (double& v : x) v /= m;
  }
}

inline DescentOutcome run_descent(const DescentProblem& prob, std::vector<double> x,
                                  const DescentOptions& opts) {
  const std::size_t n = x.size();
  std::vector<double> g(n), d(n), trial(n);
  if (prob.normalize_max) normalize_to_unit_max(x);
  double f = prob.value(x);
  DescentOutcome out;
  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it + 1;
    std::fill(g.begin(), g.end(), 0.0);
    prob.gradient(x, g);
    for (std::size_t i = 0; i < n; ++i) {
      if (prob.fixed[i]) g[i] = 0.0;
    }

    bool solved = false;
    for (const auto* builder : {&prob.preconditioner, &prob.fallback_preconditioner}) {
      if (!*builder) continue;
      Tridiagonal t = (*builder)(x);
      restrict_to_free(t, prob.fixed);
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      if (solve_spd(t, d)) {
        solved = true;
        break;
      }
    }
    double slope = solved ? dot(g, d) : 0.0;
    if (!solved || !(slope < 0.0)) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = -dot(g, g);
    }

    const double scale = std::max(std::abs(f), 1.0);
    if (-slope <= opts.tol * scale) {
      out.converged = true;
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    double f_trial = f;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * d[i];
      f_trial = prob.value(trial);
      if (std::isfinite(f_trial) && f_trial <= f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Stalled in roundoff: accept as converged only if already close.
      out.converged = -slope <= std::sqrt(opts.tol) * scale;
      break;
    }
    x.swap(trial);
    if (prob.normalize_max) {
      normalize_to_unit_max(x);
      f = prob.value(x);
    } else {
      f = f_trial;
    }
  }
  out.value = f;
  out.x = std::move(x);
  return out;
}

}  // namespace detail

/// Pins the node y_index to pinned_value (the discrete W(y)).
struct PinConstraint {
  std::size_t y_index;
  double pinned_value = 1.0;
};

struct MinimizeResult {
  DiscreteFunction minimizer;
  double objective;
  int iterations;
  bool converged;
  int restarts_used;
};

inline double evaluate_J(const ExponentContext& ctx, const SpectralShift& shift,
                         const DiscreteFunction& u) {
  return energy(ctx.p(), shift.lambda(), u.mesh(), u.values());
}

/// Nodal gradient of evaluate_J. Boundary entries are not projected out.
inline std::vector<double> gradient_J(const ExponentContext& ctx, const SpectralShift& shift,
                                      const DiscreteFunction& u) {
  std::vector<double> g(u.values().size(), 0.0);
  add_gradient_energy_gradient(ctx.p(), u.mesh(), u.values(), 1.0, g);
  if (shift.lambda() != 0.0) {
    add_power_integral_gradient(ctx.p(), u.mesh(), u.values(), -shift.lambda(), g);
  }
  return g;
}

/// Piecewise-linear hat through (0,0), (x_pin, value), (L,0).
inline DiscreteFunction pinned_tent(const Mesh& mesh, std::size_t pin, double value = 1.0) {
  const double y = mesh.node(pin);
  const double L = mesh.length();
  return DiscreteFunction::interpolate(
      mesh, [&](double x) { return value * (x <= y ? x / y : (L - x) / (L - y)); });
}

/// Nodal interpolant of the closed-form minimizer u_y.
inline DiscreteFunction interpolate_minimizer(const ExponentContext& ctx,
                                              const SpectralShift& shift, const Mesh& mesh,
                                              double y) {
  return DiscreteFunction::interpolate(
      mesh, [&](double x) { return minimizer_profile(ctx, shift, y, x); });
}

namespace detail {

inline DescentProblem energy_problem(const ExponentContext& ctx, const SpectralShift& shift,
                                     const Mesh& mesh) {
  const double p = ctx.p();
  const double lambda = shift.lambda();
  DescentProblem prob;
  prob.value = [=](std::span<const double> u) { return energy(p, lambda, mesh, u); };
  prob.gradient = [=](std::span<const double> u, std::span<double> g) {
    add_gradient_energy_gradient(p, mesh, u, 1.0, g);
    if (lambda != 0.0) add_power_integral_gradient(p, mesh, u, -lambda, g);
  };
  prob.preconditioner = [=](std::span<const double> u) {
    Tridiagonal t(u.size());
    add_gradient_energy_hessian(p, mesh, u, 1.0, t);
    if (lambda != 0.0) add_power_integral_hessian(p, mesh, u, -lambda, t);
    return t;
  };
  if (lambda > 0.0) {
    prob.fallback_preconditioner = [=](std::span<const double> u) {
      Tridiagonal t(u.size());
      add_gradient_energy_hessian(p, mesh, u, 1.0, t);
      return t;
    };
  }
  prob.fixed.assign(mesh.size(), false);
  prob.fixed.front() = true;
  prob.fixed.back() = true;
  return prob;
}

inline std::vector<double> perturbed_start(const Mesh& mesh, std::span<const double> init,
                                           std::size_t pin, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  std::vector<double> x(init.begin(), init.end());
  const double L = mesh.length();
  for (int k = 1; k <= 6; ++k) {
    const double a = coeff(rng) / k;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
      x[i] += a * std::sin(k * std::numbers::pi * mesh.node(i) / L);
    }
  }
  x[pin] = init[pin];
  return x;
}

}  // namespace detail

/// Minimizes J over the discrete pinned class. Deterministic given opts.seed.
/// Non-convergence is reported through MinimizeResult::converged.
inline MinimizeResult minimize_pinned(const ExponentContext& ctx, const SpectralShift& shift,
                                      const PinConstraint& pin, const DiscreteFunction& init,
                                      const DescentOptions& opts = {}) {
  const Mesh& mesh = init.mesh();
  if (pin.y_index == 0 || pin.y_index >= mesh.cells()) {
    throw domain_error("minimize_pinned: pin must be an interior node");
  }
  if (init[pin.y_index] != pin.pinned_value) {
    throw domain_error("minimize_pinned: initial guess violates the pin");
  }
  detail::DescentProblem prob = detail::energy_problem(ctx, shift, mesh);
  prob.fixed[pin.y_index] = true;

  const int restarts = shift.lambda() > 0.0 ? std::max(opts.restarts, 0) : 0;
  std::mt19937_64 rng(opts.seed);
  detail::DescentOutcome best =
      detail::run_descent(prob, std::vector<double>(init.values().begin(), init.values().end()),
                          opts);
  int total_iterations = best.iterations;
  for (int r = 0; r < restarts; ++r) {
    auto start = detail::perturbed_start(mesh, init.values(), pin.y_index, rng);
    detail::DescentOutcome cand = detail::run_descent(prob, std::move(start), opts);
    total_iterations += cand.iterations;
    if (cand.value < best.value) best = std::move(cand);
  }
  return {DiscreteFunction(mesh, std::move(best.x)), best.value, total_iterations, best.converged,
          restarts};
}

struct PinnedSample {
  double y;
  std::size_t node;
  double objective;
  bool converged;
};

struct GlobalEstimate {
  double value;  // min over samples
  double argmin_y;
  std::size_t argmin_node;
  std::vector<PinnedSample> samples;  // ordered by y
  bool all_converged;
};

/// min over y-samples in (0, pi_p/2] of min_{u(y)=1} J(u). Samples are the
/// nodes nearest to j (pi_p/2) / count, j = 1..count; the pinned runs are
/// independent and execute concurrently.
inline GlobalEstimate global_constant_estimate(const ExponentContext& ctx,
                                               const SpectralShift& shift, const Mesh& mesh,
                                               std::size_t y_grid_count,
                                               const DescentOptions& opts = {}) {
  if (y_grid_count < 3) throw domain_error("global_constant_estimate: need at least 3 samples");
  std::vector<std::size_t> nodes;
  for (std::size_t j = 1; j <= y_grid_count; ++j) {
    const double y = ctx.half_pi_p() * static_cast<double>(j) / static_cast<double>(y_grid_count);
    const std::size_t node = std::max<std::size_t>(mesh.nearest_node(y), 1);
    if (nodes.empty() || nodes.back() != node) nodes.push_back(node);
  }
  std::vector<std::future<MinimizeResult>> runs;
  runs.reserve(nodes.size());
  for (std::size_t node : nodes) {
    runs.push_back(std::async(std::launch::async, [&ctx, &shift, &mesh, &opts, node] {
      return minimize_pinned(ctx, shift, PinConstraint{node}, pinned_tent(mesh, node), opts);
    }));
  }
  GlobalEstimate est{0.0, 0.0, 0, {}, true};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const MinimizeResult r = runs[i].get();
    est.samples.push_back({mesh.node(nodes[i]), nodes[i], r.objective, r.converged});
    est.all_converged = est.all_converged && r.converged;
    if (i == 0 || r.objective < est.value) {
      est.value = r.objective;
      est.argmin_y = mesh.node(nodes[i]);
      est.argmin_node = nodes[i];
    }
  }
  return est;
}

struct EigenResult {
  double eigenvalue;
  DiscreteFunction eigenfunction;  // positive, unit max-norm
  int iterations;
  bool converged;
};

/// Minimizes int |u'|^p / int |u|^p; the minimum approximates lambda_1 = p - 1.
inline EigenResult rayleigh_first_eigen(const ExponentContext& ctx, const Mesh& mesh,
                                        const DescentOptions& opts = {}) {
  const double p = ctx.p();
  detail::DescentProblem prob;
  prob.value = [=](std::span<const double> u) {
    return std::log(gradient_energy(p, mesh, u)) - std::log(power_integral(p, mesh, u));
  };
  prob.gradient = [=](std::span<const double> u, std::span<double> g) {
    add_gradient_energy_gradient(p, mesh, u, 1.0 / gradient_energy(p, mesh, u), g);
    add_power_integral_gradient(p, mesh, u, -1.0 / power_integral(p, mesh, u), g);
  };
  prob.preconditioner = [=](std::span<const double> u) {
    detail::Tridiagonal t(u.size());
    add_gradient_energy_hessian(p, mesh, u, 1.0 / gradient_energy(p, mesh, u), t);
    return t;
  };
  prob.fixed.assign(mesh.size(), false);
  prob.fixed.front() = true;
  prob.fixed.back() = true;
  prob.normalize_max = true;

  const double L = mesh.length();
  const DiscreteFunction init =
      DiscreteFunction::interpolate(mesh, [&](double x) { return x * (L - x); });
  detail::DescentOutcome out =
      detail::run_descent(prob, std::vector<double>(init.values().begin(), init.values().end()),
                          opts);
  double sign = 0.0;
  for (double v : out.x) sign += v;
  if (sign < 0.0) {
    for (double& v : out.x) v = -v;
  }
  const double eig = gradient_energy(p, mesh, out.x) / power_integral(p, mesh, out.x);
  return {eig, DiscreteFunction(mesh, std::move(out.x)), out.iterations, out.converged};
}

struct AlphaResult {
  double alpha;
  DiscreteFunction minimizer;  // unit max-norm
  int iterations;
  bool converged;
};

/// alpha(delta) = inf J(phi) / int r_delta |phi|^p. The mesh must resolve the
/// tent: h < delta / 4.
inline AlphaResult alpha_delta(const ExponentContext& ctx, const SpectralShift& shift,
                               const TentProfile& tent, const Mesh& mesh,
                               const DescentOptions& opts = {}) {
  if (!(mesh.h() < tent.delta() / 4.0)) {
    throw domain_error("alpha_delta: mesh too coarse for the tent (need h < delta/4)");
  }
  const double p = ctx.p();
  const double lambda = shift.lambda();
  detail::DescentProblem prob;
  prob.value = [=](std::span<const double> u) {
    return std::log(energy(p, lambda, mesh, u)) -
           std::log(weighted_power_integral(p, mesh, u, tent));
  };
  prob.gradient = [=](std::span<const double> u, std::span<double> g) {
    const double j = energy(p, lambda, mesh, u);
    add_gradient_energy_gradient(p, mesh, u, 1.0 / j, g);
    if (lambda != 0.0) add_power_integral_gradient(p, mesh, u, -lambda / j, g);
    add_weighted_power_integral_gradient(p, mesh, u, tent,
                                         -1.0 / weighted_power_integral(p, mesh, u, tent), g);
  };
  prob.preconditioner = [=](std::span<const double> u) {
    const double j = energy(p, lambda, mesh, u);
    detail::Tridiagonal t(u.size());
    add_gradient_energy_hessian(p, mesh, u, 1.0 / j, t);
    if (lambda != 0.0) add_power_integral_hessian(p, mesh, u, -lambda / j, t);
    return t;
  };
  prob.fallback_preconditioner = [=](std::span<const double> u) {
    detail::Tridiagonal t(u.size());
    add_gradient_energy_hessian(p, mesh, u, 1.0 / energy(p, lambda, mesh, u), t);
    return t;
  };
  prob.fixed.assign(mesh.size(), false);
  prob.fixed.front() = true;
  prob.fixed.back() = true;
  prob.normalize_max = true;

  const DiscreteFunction init = pinned_tent(mesh, mesh.nearest_node(tent.center()));
  detail::DescentOutcome out =
      detail::run_descent(prob, std::vector<double>(init.values().begin(), init.values().end()),
                          opts);
  const double alpha =
      energy(p, lambda, mesh, out.x) / weighted_power_integral(p, mesh, out.x, tent);
  return {alpha, DiscreteFunction(mesh, std::move(out.x)), out.iterations, out.converged};
}

}  // namespace plyap

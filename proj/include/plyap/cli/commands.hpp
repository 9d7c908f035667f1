#pragma once

// The CLI commands as library functions: each maps a RunConfig (plus its own
// arguments) to a ResultRecord and an exit status. Argument parsing and I/O
// live in tools/plyap_cli.cpp.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plyap/cli/record.hpp"
#include "plyap/cli/verify.hpp"
#include "plyap/discrete.hpp"
#include "plyap/errors.hpp"
#include "plyap/lyapunov.hpp"
#include "plyap/ptrig.hpp"
#include "plyap/shooting.hpp"
#include "plyap/variational.hpp"

namespace plyap::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailure = 1, kUsageError = 2 };

struct RunConfig {
  double p = 2.0;
  double lambda = 0.0;
  int mesh_n = 1024;
  int steps = 20000;
  std::uint64_t seed = 0;
  Format format = Format::text;
  std::optional<std::string> output;
  bool allow_nonconverged = false;
  bool timing = false;
};

struct CommandResult {
  ResultRecord record;
  int exit_code;
};

/// Threshold on |u(pi_p)| below which a shot counts as a solution.
inline constexpr double kShootingTolerance = 1e-6;

namespace detail {

inline void validate(const RunConfig& cfg) {
  if (!(cfg.p > 1.0) || !std::isfinite(cfg.p)) throw domain_error("p must be finite and > 1");
  if (!std::isfinite(cfg.lambda)) throw domain_error("lambda must be finite");
  if (cfg.mesh_n < 16) throw domain_error("mesh-n must be >= 16");
  if (cfg.steps < 100) throw domain_error("steps must be >= 100");
}

inline void echo_common(ResultRecord& r, const RunConfig& cfg) {
  r.input("p", cfg.p).input("lambda", cfg.lambda);
}

inline DescentOptions descent_options(const RunConfig& cfg) {
  DescentOptions o;
  o.seed = cfg.seed;
  return o;
}

inline int status(const ResultRecord& r, const RunConfig& cfg) {
  if (!r.all_checks_passed()) return kCheckFailure;
  if (!cfg.allow_nonconverged && !r.all_converged()) return kCheckFailure;
  return kSuccess;
}

inline std::vector<double> nodes_of(const DiscreteFunction& u) {
  const auto n = u.mesh().nodes();
  return {n.begin(), n.end()};
}

}  // namespace detail

/// C(p, lambda) with its branch, K, pi_p and lambda_1.
inline CommandResult cmd_constant(const RunConfig& cfg) {
  detail::validate(cfg);
  const ExponentContext ctx(cfg.p);
  const SpectralShift shift(ctx, cfg.lambda);
  ResultRecord r("constant");
  detail::echo_common(r, cfg);
  r.label("branch", to_string(shift.branch()));
  r.scalar("C", lyapunov_constant(ctx, shift).value)
      .scalar("K", shift.K())
      .scalar("pi_p", ctx.pi_p())
      .scalar("lambda1", ctx.lambda1());
  return {std::move(r), kSuccess};
}

/// One invariant suite. The reduction suite always runs at p = 2.
inline CommandResult cmd_verify(const RunConfig& cfg, Suite suite) {
  detail::validate(cfg);
  ResultRecord r("verify");
  r.input("suite", std::string(to_string(suite)));
  std::vector<Check> checks;
  switch (suite) {
    case Suite::identities:
      r.input("p", cfg.p);
      checks = identities_suite(ExponentContext(cfg.p));
      break;
    case Suite::integrals:
      r.input("p", cfg.p).input("seed", static_cast<std::int64_t>(cfg.seed));
      checks = integrals_suite(ExponentContext(cfg.p), cfg.seed);
      break;
    case Suite::ivp:
      r.input("p", cfg.p).input("steps", static_cast<std::int64_t>(cfg.steps));
      checks = ivp_suite(ExponentContext(cfg.p), cfg.steps);
      break;
    case Suite::reduction:
      r.input("p", 2.0);
      checks = reduction_suite();
      break;
  }
  for (Check& c : checks) r.check(std::move(c));
  return {r, detail::status(r, cfg)};
}

/// min J over the pinned class u(y) = 1, y snapped to the nearest node.
inline CommandResult cmd_minimize(const RunConfig& cfg, double y) {
  detail::validate(cfg);
  const ExponentContext ctx(cfg.p);
  const SpectralShift shift(ctx, cfg.lambda);
  if (!(y > 0.0 && y < ctx.pi_p())) throw domain_error("y must lie in (0, pi_p)");
  const Mesh mesh(ctx, static_cast<std::size_t>(cfg.mesh_n));
  const std::size_t node = mesh.nearest_node(y);
  if (node == 0 || node == mesh.cells()) throw domain_error("y is too close to the boundary for this mesh");
  const MinimizeResult m =
      minimize_pinned(ctx, shift, PinConstraint{node}, pinned_tent(mesh, node), detail::descent_options(cfg));
  const double y_node = mesh.node(node);
  // F is symmetric about pi_p / 2.
  const double F = F_closed(ctx, shift, std::min(y_node, ctx.pi_p() - y_node));

  ResultRecord r("minimize");
  detail::echo_common(r, cfg);
  r.input("mesh_n", static_cast<std::int64_t>(cfg.mesh_n))
      .input("seed", static_cast<std::int64_t>(cfg.seed))
      .input("y", y);
  r.label("branch", to_string(shift.branch()));
  r.scalar("y_node", y_node)
      .scalar("objective", m.objective)
      .scalar("F_closed", F)
      .scalar("relative_error", (m.objective - F) / F)
      .scalar("max_abs", m.minimizer.max_abs())
      .scalar("argmax_x", mesh.node(m.minimizer.argmax_abs()))
      .scalar("iterations", m.iterations)
      .scalar("restarts", m.restarts_used);
  r.series("x", detail::nodes_of(m.minimizer))
      .series("u", {m.minimizer.values().begin(), m.minimizer.values().end()});
  r.converged("minimize", m.converged);
  return {r, detail::status(r, cfg)};
}

/// Pinned minima over y_count pins in (0, pi_p/2]; the smallest estimates
/// C(p, lambda) and should sit at the pin nearest pi_p/2.
inline CommandResult cmd_sweep(const RunConfig& cfg, int y_count) {
  detail::validate(cfg);
  if (y_count < 3) throw domain_error("y-count must be >= 3");
  const ExponentContext ctx(cfg.p);
  const SpectralShift shift(ctx, cfg.lambda);
  const Mesh mesh(ctx, static_cast<std::size_t>(cfg.mesh_n));
  const GlobalEstimate est = global_constant_estimate(ctx, shift, mesh, static_cast<std::size_t>(y_count),
                                                      detail::descent_options(cfg));
  const double C = lyapunov_constant(ctx, shift).value;

  ResultRecord r("sweep");
  detail::echo_common(r, cfg);
  r.input("mesh_n", static_cast<std::int64_t>(cfg.mesh_n))
      .input("seed", static_cast<std::int64_t>(cfg.seed))
      .input("y_count", static_cast<std::int64_t>(y_count));
  r.label("branch", to_string(shift.branch()));
  r.scalar("estimate", est.value)
      .scalar("C", C)
      .scalar("relative_error", (est.value - C) / C)
      .scalar("argmin_y", est.argmin_y);
  std::vector<double> ys, obj, closed, conv;
  for (const PinnedSample& s : est.samples) {
    ys.push_back(s.y);
    obj.push_back(s.objective);
    closed.push_back(F_closed(ctx, shift, std::min(s.y, ctx.pi_p() - s.y)));
    conv.push_back(s.converged ? 1.0 : 0.0);
  }
  r.series("y", ys).series("objective", obj).series("F_closed", closed).series("converged", conv);
  const std::size_t half = mesh.nearest_node(ctx.half_pi_p());
  r.check({"argmin_at_half_period", std::abs(est.argmin_y - mesh.node(half)), 0.0, est.argmin_node == half});
  r.converged("all_samples", est.all_converged);
  return {r, detail::status(r, cfg)};
}

/// alpha(delta) for each delta (tent centred at `center`, default pi_p/2);
/// the runs execute concurrently and are reported in input order.
inline CommandResult cmd_sharpness(const RunConfig& cfg, const std::vector<double>& deltas,
                                   std::optional<double> center = std::nullopt) {
  detail::validate(cfg);
  if (deltas.empty()) throw domain_error("need at least one delta");
  const ExponentContext ctx(cfg.p);
  const SpectralShift shift(ctx, cfg.lambda);
  const Mesh mesh(ctx, static_cast<std::size_t>(cfg.mesh_n));
  const double c = center.value_or(ctx.half_pi_p());
  std::vector<TentProfile> tents;
  for (double d : deltas) {
    tents.emplace_back(ctx, c, d);
    if (!(mesh.h() < d / 4.0)) throw domain_error("mesh too coarse for delta; need h < delta/4");
  }
  const DescentOptions opts = detail::descent_options(cfg);
  std::vector<std::future<AlphaResult>> runs;
  for (const TentProfile& t : tents) {
    runs.push_back(std::async(std::launch::async, [&ctx, &shift, &mesh, &opts, t] {
      return alpha_delta(ctx, shift, t, mesh, opts);
    }));
  }
  const double C = lyapunov_constant(ctx, shift).value;
  std::vector<double> alpha, gap, conv;
  bool all_converged = true;
  for (auto& f : runs) {
    const AlphaResult a = f.get();
    alpha.push_back(a.alpha);
    gap.push_back(a.alpha - C);
    conv.push_back(a.converged ? 1.0 : 0.0);
    all_converged = all_converged && a.converged;
  }

  ResultRecord r("sharpness");
  detail::echo_common(r, cfg);
  r.input("mesh_n", static_cast<std::int64_t>(cfg.mesh_n))
      .input("seed", static_cast<std::int64_t>(cfg.seed))
      .input("center", c)
      .input("deltas", deltas);
  r.label("branch", to_string(shift.branch()));
  r.scalar("C", C);
  r.series("delta", deltas).series("alpha", alpha).series("gap", gap).series("converged", conv);

  // Order by decreasing delta: alpha must strictly decrease along it.
  std::vector<std::size_t> order(deltas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deltas[a] > deltas[b]; });
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < order.size(); ++k) {
    worst_rise = std::max(worst_rise, alpha[order[k]] - alpha[order[k - 1]]);
  }
  if (order.size() > 1) r.check({"alpha_strictly_decreasing", worst_rise, 0.0, worst_rise < 0.0});
  const double min_gap = *std::min_element(gap.begin(), gap.end());
  r.check({"alpha_above_constant", -min_gap, 0.0, min_gap > 0.0});
  r.converged("all_deltas", all_converged);
  return {r, detail::status(r, cfg)};
}

struct ShootArgs {
  std::optional<double> amplitude;  // absent: use alpha(delta)
  double delta = 0.05;
  std::optional<double> center;     // absent: pi_p / 2
};

/// Miss distance u(pi_p) of the normalized shot with r = a r_delta.
inline CommandResult cmd_shoot(const RunConfig& cfg, const ShootArgs& args) {
  detail::validate(cfg);
  const ExponentContext ctx(cfg.p);
  const SpectralShift shift(ctx, cfg.lambda);
  const TentProfile tent(ctx, args.center.value_or(ctx.half_pi_p()), args.delta);
  ResultRecord r("shoot");
  detail::echo_common(r, cfg);
  r.input("steps", static_cast<std::int64_t>(cfg.steps)).input("delta", args.delta).input("center", tent.center());

  double a = 0.0;
  if (args.amplitude) {
    a = *args.amplitude;
    r.input("amplitude", a);
  } else {
    const Mesh mesh(ctx, static_cast<std::size_t>(cfg.mesh_n));
    const AlphaResult alpha = alpha_delta(ctx, shift, tent, mesh, detail::descent_options(cfg));
    a = alpha.alpha;
    r.input("amplitude_source", std::string("alpha_delta"));
    r.input("mesh_n", static_cast<std::int64_t>(cfg.mesh_n)).input("seed", static_cast<std::int64_t>(cfg.seed));
    r.converged("alpha_delta", alpha.converged);
  }
  const PotentialSpec pot = PotentialSpec::tent(tent, a);
  const double miss = miss_distance(ctx, shift, pot, cfg.steps);
  const double C = lyapunov_constant(ctx, shift).value;
  const bool solves = std::abs(miss) < kShootingTolerance;
  r.label("branch", to_string(shift.branch()));
  r.scalar("amplitude", a)
      .scalar("positive_mass", pot.positive_mass(ctx.pi_p()))
      .scalar("C", C)
      .scalar("miss", miss)
      .scalar("tolerance", kShootingTolerance)
      .scalar("solves", solves ? 1.0 : 0.0);
  // A solution may only exist above the threshold.
  r.check({"threshold_contract", solves ? C - a : 0.0, 0.0, !solves || a > C});
  return {r, detail::status(r, cfg)};
}

/// The pinned minimizer u_y sampled on [0, pi_p]: mesh_n + 1 uniform points
/// plus y itself and, when 1/2 < K < 1, the point (1 - 1/(2K)) pi_p.
inline CommandResult cmd_fig4(const RunConfig& cfg, double y) {
  detail::validate(cfg);
  const ExponentContext ctx(cfg.p);
  const SpectralShift shift(ctx, cfg.lambda);
  const double P = ctx.pi_p();
  const double K = shift.K();
  std::vector<double> xs;
  for (int i = 0; i <= cfg.mesh_n; ++i) xs.push_back(i == cfg.mesh_n ? P : P * i / cfg.mesh_n);
  xs.push_back(y);
  const bool overshoot = shift.branch() == Branch::positive_subcritical && K > 0.5;
  const double xr = (1.0 - 1.0 / (2.0 * K)) * P;
  if (overshoot) xs.push_back(xr);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> us;
  for (double x : xs) us.push_back(minimizer_profile(ctx, shift, y, x));
  const auto top = std::max_element(us.begin(), us.end());

  ResultRecord r("fig4");
  detail::echo_common(r, cfg);
  r.input("mesh_n", static_cast<std::int64_t>(cfg.mesh_n)).input("y", y);
  r.label("branch", to_string(shift.branch()));
  r.scalar("K", K).scalar("max_u", *top).scalar("argmax_x", xs[static_cast<std::size_t>(top - us.begin())]);
  if (overshoot) r.scalar("x_r", xr).scalar("u_at_x_r", minimizer_profile(ctx, shift, y, xr));
  r.series("x", xs).series("u", us);
  return {r, kSuccess};
}

/// Runs `body` and stamps the wall time when requested.
template <class Body>
CommandResult timed(const RunConfig& cfg, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult out = body();
  if (cfg.timing) {
    out.record.set_wall_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return out;
}

}  // namespace plyap::cli

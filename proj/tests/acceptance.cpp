// Acceptance run: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are fixed here. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "plyap/cli/commands.hpp"
#include "plyap/lyapunov.hpp"
#include "plyap/shooting.hpp"
#include "plyap/variational.hpp"

using namespace plyap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct BranchPoint {
  double p;
  double lambda;
};

const std::vector<BranchPoint> kGrid{{2, 0.25}, {3, 0}, {2, -4}, {3, -2}, {1.5, 0.3}};
const std::vector<double> kIdentityExponents{1.2, 1.5, 2.0, 3.0, 5.0};

double C(const ExponentContext& ctx, double lambda) {
  return lyapunov_constant(ctx, SpectralShift(ctx, lambda)).value;
}

// Adaptive Gauss-Kronrod over [a, b] with extra cuts where the integrand is not smooth.
double quad(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(a, cuts[i]);
    const double hi = std::min(b, cuts[i + 1]);
    if (hi > lo) s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12);
  }
  return s;
}

Outcome classical_reduction() {
  Outcome o;
  const ExponentContext ctx(2.0);
  const double pi = std::numbers::pi;
  double worst = 0.0;
  for (double lambda : {-4.0, -1.0, 0.0, 0.25, 0.81}) {
    double expected = 4.0 / pi;
    if (lambda > 0) expected = 2 * std::sqrt(lambda) / std::tan(std::sqrt(lambda) * pi / 2);
    if (lambda < 0) expected = 2 * std::sqrt(-lambda) / std::tanh(std::sqrt(-lambda) * pi / 2);
    worst = std::max(worst, std::abs(C(ctx, lambda) - expected));
  }
  o.require(worst <= 1e-10, fmt("max error %.3g > 1e-10", worst));
  o.detail = o.pass ? fmt("max |C - classical| = %.3g", worst) : o.detail;
  return o;
}

Outcome zero_formula() {
  Outcome o;
  double worst = 0.0, worst_cont = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const ExponentContext ctx(p);
    const double expected = std::pow(2.0, p) / std::pow(pi_p(p), p - 1.0);
    const double c0 = C(ctx, 0.0);
    worst = std::max(worst, std::abs(c0 - expected));
    worst_cont = std::max({worst_cont, std::abs(C(ctx, 1e-8) - c0), std::abs(C(ctx, -1e-8) - c0)});
  }
  o.require(worst <= 1e-12, fmt("formula error %.3g", worst));
  o.require(worst_cont <= 1e-5, fmt("continuity error %.3g", worst_cont));
  if (o.pass) o.detail = fmt("formula %.3g, continuity at 1e-8 %.3g", worst, worst_cont);
  return o;
}

Outcome identities() {
  Outcome o;
  double pyth = 0.0, hyp = 0.0, dsin = 0.0, dsinh = 0.0;
  for (double p : kIdentityExponents) {
    const ExponentContext ctx(p);
    const double P = ctx.pi_p();
    for (int i = 0; i < 1000; ++i) {
      const double x = -2 * P + 4 * P * (i + 0.5) / 1000;
      const SinCos sc = sincos_p(ctx, x);
      pyth = std::max(pyth, std::abs(std::pow(std::abs(sc.sin), p) + std::pow(std::abs(sc.cos), p) - 1.0));
      const double z = -10.0 + 20.0 * (i + 0.5) / 1000;
      const SinhCosh sh = sinhcosh_p(ctx, z);
      const double cp = std::pow(sh.cosh, p);
      hyp = std::max(hyp, std::abs(cp - std::pow(std::abs(sh.sinh), p) - 1.0) / cp);
    }
    // Central differences on a half-offset grid, which stays pi_p / 200 away
    // from the points where cos_p is only Hoelder.
    const double h = 1e-5;
    for (int i = 0; i < 200; ++i) {
      const double x = 2 * P * (i + 0.5) / 200;
      dsin = std::max(dsin, std::abs((sin_p(ctx, x + h) - sin_p(ctx, x - h)) / (2 * h) - cos_p(ctx, x)));
      const double z = -3.0 + 6.0 * (i + 0.5) / 200;
      const double d = (sinh_p(ctx, z + h) - sinh_p(ctx, z - h)) / (2 * h);
      dsinh = std::max(dsinh, std::abs(d - cosh_p(ctx, z)) / cosh_p(ctx, z));
    }
  }
  o.require(pyth <= 1e-12, fmt("pythagorean %.3g", pyth));
  o.require(hyp <= 1e-11, fmt("hyperbolic %.3g", hyp));
  o.require(dsin <= 1e-6 && dsinh <= 1e-6, fmt("derivatives %.3g / %.3g", dsin, dsinh));
  if (o.pass) {
    o.detail = fmt("pythagorean %.2g, hyperbolic %.2g, ", pyth, hyp) + fmt("d sin %.2g, d sinh %.2g", dsin, dsinh);
  }
  return o;
}

Outcome integral_formulas() {
  Outcome o;
  double quad_err = 0.0, sum_err = 0.0;
  std::mt19937_64 rng(20240611);
  for (double p : kIdentityExponents) {
    const ExponentContext ctx(p);
    const double P = ctx.pi_p();
    std::uniform_real_distribution<double> trig(0.0, 2 * P), hyper(0.0, 3.0);
    const std::vector<double> quarters{0.5 * P, P, 1.5 * P};
    for (int i = 0; i < 100; ++i) {
      const double z = trig(rng);
      const double ic = int_cos_p_pow(ctx, z), is = int_sin_p_pow(ctx, z);
      const double qc = quad([&](double t) { return std::pow(std::abs(cos_p(ctx, t)), p); }, 0, z, quarters);
      const double qs = quad([&](double t) { return std::pow(std::abs(sin_p(ctx, t)), p); }, 0, z, quarters);
      quad_err = std::max({quad_err, std::abs(ic - qc), std::abs(is - qs)});
      sum_err = std::max(sum_err, std::abs(ic + is - z));

      const double w = hyper(rng);
      const double ich = int_cosh_p_pow(ctx, w), ish = int_sinh_p_pow(ctx, w);
      const double qch = quad([&](double t) { return std::pow(cosh_p(ctx, t), p); }, 0, w, {});
      const double qsh = quad([&](double t) { return std::pow(std::abs(sinh_p(ctx, t)), p); }, 0, w, {});
      quad_err = std::max({quad_err, std::abs(ich - qch) / std::max(1.0, qch), std::abs(ish - qsh) / std::max(1.0, qsh)});
      sum_err = std::max(sum_err, std::abs(ich - ish - w));
    }
  }
  o.require(quad_err <= 1e-9, fmt("closed form vs quadrature %.3g", quad_err));
  o.require(sum_err <= 1e-10, fmt("sum/difference %.3g", sum_err));
  if (o.pass) o.detail = fmt("quadrature %.2g, sum/difference %.2g", quad_err, sum_err);
  return o;
}

Outcome ivp_cross_check() {
  Outcome o;
  double dev = 0.0, ratio = INFINITY;
  for (double p : {1.5, 2.0, 3.0}) {
    const ExponentContext ctx(p);
    for (double sign : {1.0, -1.0}) {
      const double lambda = sign * ctx.lambda1();
      auto exact = [&](double x) { return sign > 0 ? sin_p(ctx, x) : sinh_p(ctx, x); };
      for (const ShootingState& s : integrate_ivp(ctx, lambda, PotentialSpec::zero(), 20000)) {
        dev = std::max(dev, std::abs(s.u - exact(s.x)));
      }
      const double target = exact(ctx.pi_p());
      const double e1 = std::abs(miss_distance(ctx, lambda, PotentialSpec::zero(), 200) - target);
      const double e2 = std::abs(miss_distance(ctx, lambda, PotentialSpec::zero(), 400) - target);
      ratio = std::min(ratio, e1 / e2);
    }
  }
  o.require(dev < 1e-6, fmt("max deviation %.3g", dev));
  o.require(ratio >= 8.0, fmt("step-halving ratio %.3g", ratio));
  if (o.pass) o.detail = fmt("max deviation %.2g, min step-halving ratio %.3g", dev, ratio);
  return o;
}

Outcome variational_F() {
  Outcome o;
  double worst = 0.0;
  struct Job {
    BranchPoint b;
    std::future<std::pair<std::size_t, MinimizeResult>> half, quarter;
    std::future<GlobalEstimate> sweep;
  };
  std::vector<Job> jobs;
  for (const BranchPoint& b : kGrid) {
    jobs.push_back({b, {}, {}, {}});
  }
  for (Job& j : jobs) {
    auto pinned = [b = j.b](double frac) {
      const ExponentContext ctx(b.p);
      const SpectralShift shift(ctx, b.lambda);
      const Mesh mesh(ctx, 2048);
      const std::size_t node = mesh.nearest_node(frac * ctx.half_pi_p());
      return std::pair{node, minimize_pinned(ctx, shift, PinConstraint{node}, pinned_tent(mesh, node))};
    };
    j.half = std::async(std::launch::async, pinned, 1.0);
    j.quarter = std::async(std::launch::async, pinned, 0.5);
    j.sweep = std::async(std::launch::async, [b = j.b] {
      const ExponentContext ctx(b.p);
      return global_constant_estimate(ctx, SpectralShift(ctx, b.lambda), Mesh(ctx, 2048), 8);
    });
  }
  for (Job& j : jobs) {
    const ExponentContext ctx(j.b.p);
    const SpectralShift shift(ctx, j.b.lambda);
    const Mesh mesh(ctx, 2048);
    for (auto* fut : {&j.quarter, &j.half}) {
      const auto [node, r] = fut->get();
      const double y = mesh.node(node);
      const double f = F_closed(ctx, shift, y);
      const double rel = std::abs(r.objective - f) / f;
      worst = std::max(worst, rel);
      o.require(r.converged, fmt("p=%g lambda=%g y=%.4g not converged", j.b.p, j.b.lambda, y));
      o.require(rel <= 0.01, fmt("p=%g lambda=%g: relative error %.3g", j.b.p, j.b.lambda, rel));
    }
    const GlobalEstimate est = j.sweep.get();
    o.require(est.argmin_node == mesh.nearest_node(ctx.half_pi_p()),
              fmt("p=%g lambda=%g: sweep argmin at %.5g", j.b.p, j.b.lambda, est.argmin_y));
  }
  if (o.pass) o.detail = fmt("max relative error %.2g; every sweep argmin at the node nearest pi_p/2", worst);
  return o;
}

Outcome first_eigenvalue() {
  Outcome o;
  double worst = 0.0, worst_fn = 0.0;
  std::vector<std::future<std::pair<double, double>>> runs;
  for (double p : {1.5, 2.0, 3.0}) {
    runs.push_back(std::async(std::launch::async, [p] {
      const ExponentContext ctx(p);
      const Mesh mesh(ctx, 2048);
      const EigenResult e = rayleigh_first_eigen(ctx, mesh);
      double fn = 0.0;
      for (std::size_t i = 0; i < mesh.size(); ++i) {
        fn = std::max(fn, std::abs(e.eigenfunction[i] - sin_p(ctx, mesh.node(i))));
      }
      return std::pair{std::abs(e.eigenvalue - (p - 1.0)) / (p - 1.0), fn};
    }));
  }
  for (auto& r : runs) {
    const auto [rel, fn] = r.get();
    worst = std::max(worst, rel);
    worst_fn = std::max(worst_fn, fn);
  }
  o.require(worst <= 0.005, fmt("eigenvalue relative error %.3g", worst));
  o.require(worst_fn <= 1e-2, fmt("eigenfunction error %.3g", worst_fn));
  if (o.pass) o.detail = fmt("eigenvalue rel. error %.2g, eigenfunction max error %.2g", worst, worst_fn);
  return o;
}

const std::vector<BranchPoint> kSharpGrid{{2, 0}, {3, -2}, {2, 0.25}};
const std::vector<double> kDeltas{0.4, 0.2, 0.1, 0.05};

// alpha(delta) on kSharpGrid x kDeltas at n = 2048, row-major.
std::vector<double> alpha_table() {
  std::vector<std::future<double>> runs;
  for (const BranchPoint& b : kSharpGrid) {
    for (double d : kDeltas) {
      runs.push_back(std::async(std::launch::async, [b, d] {
        const ExponentContext ctx(b.p);
        const AlphaResult a = alpha_delta(ctx, SpectralShift(ctx, b.lambda), TentProfile(ctx, ctx.half_pi_p(), d),
                                          Mesh(ctx, 2048));
        return a.converged ? a.alpha : NAN;
      }));
    }
  }
  std::vector<double> out;
  for (auto& r : runs) out.push_back(r.get());
  return out;
}

Outcome sharpness(const std::vector<double>& alpha) {
  Outcome o;
  double worst_factor = INFINITY;
  for (std::size_t i = 0; i < kSharpGrid.size(); ++i) {
    const BranchPoint b = kSharpGrid[i];
    const ExponentContext ctx(b.p);
    const double c = C(ctx, b.lambda);
    const double* a = &alpha[i * kDeltas.size()];
    for (std::size_t k = 0; k < kDeltas.size(); ++k) {
      o.require(std::isfinite(a[k]), fmt("p=%g lambda=%g delta=%g: no convergence", b.p, b.lambda, kDeltas[k]));
      o.require(a[k] > c, fmt("p=%g lambda=%g delta=%g: alpha <= C", b.p, b.lambda, kDeltas[k]));
      if (k > 0) o.require(a[k] < a[k - 1], fmt("p=%g lambda=%g delta=%g: not decreasing", b.p, b.lambda, kDeltas[k]));
    }
    const double factor = (a[0] - c) / (a[kDeltas.size() - 1] - c);
    worst_factor = std::min(worst_factor, factor);
    o.require(factor >= 2.0, fmt("p=%g lambda=%g: gap ratio %.3g < 2", b.p, b.lambda, factor));
  }
  if (o.pass) o.detail = fmt("decreasing and above C; min gap ratio (0.4 vs 0.05) %.3g", worst_factor);
  return o;
}

Outcome threshold_shooting(const std::vector<double>& alpha) {
  Outcome o;
  const double tol = cli::kShootingTolerance;
  double min_sub = INFINITY, max_hit = 0.0;
  for (std::size_t i = 0; i < kSharpGrid.size(); ++i) {
    const BranchPoint b = kSharpGrid[i];
    const ExponentContext ctx(b.p);
    const SpectralShift shift(ctx, b.lambda);
    const TentProfile tent(ctx, ctx.half_pi_p(), 0.05);
    const double c = lyapunov_constant(ctx, shift).value;
    const double a = alpha[i * kDeltas.size() + kDeltas.size() - 1];
    const ThresholdReport rep = verify_lyapunov_threshold(ctx, shift, tent, {0.9 * c, a}, 20000, tol);
    min_sub = std::min(min_sub, std::abs(rep.entries[0].miss));
    max_hit = std::max(max_hit, std::abs(rep.entries[1].miss));
  }
  o.require(min_sub > 10 * tol, fmt("|miss| at 0.9 C only %.3g", min_sub));
  o.require(max_hit < 1e-3, fmt("|miss| at alpha(0.05) %.3g", max_hit));
  if (o.pass) o.detail = fmt("min |miss| at 0.9 C %.3g, max |miss| at alpha(0.05) %.3g", min_sub, max_hit);
  return o;
}

Outcome overshoot_curve() {
  Outcome o;
  double min_excess = INFINITY, half_err = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    cli::RunConfig cfg;
    cfg.p = p;
    cfg.lambda = std::pow(0.75, p) * (p - 1.0);
    cfg.mesh_n = 1000;
    const double P = pi_p(p);
    const double xr = (1.0 - 1.0 / 1.5) * P;
    const cli::ResultRecord below = cli::cmd_fig4(cfg, 0.5 * xr).record;
    const auto& xs = below.series_values("x");
    const auto& us = below.series_values("u");
    const auto at = std::find(xs.begin(), xs.end(), xr);
    o.require(at != xs.end(), fmt("p=%g: x_r missing from the curve", p));
    if (at != xs.end()) min_excess = std::min(min_excess, us[static_cast<std::size_t>(at - xs.begin())] - 1.0);

    const cli::ResultRecord half = cli::cmd_fig4(cfg, 0.5 * P).record;
    half_err = std::max({half_err, std::abs(half.scalar_value("max_u") - 1.0),
                         std::abs(half.scalar_value("argmax_x") - 0.5 * P)});
  }
  o.require(min_excess > 0.0, fmt("u(x_r) - 1 = %.3g", min_excess));
  o.require(half_err <= 1e-9, fmt("y = pi_p/2 peak error %.3g", half_err));
  if (o.pass) o.detail = fmt("min u(x_r) - 1 = %.3g, peak error at pi_p/2 %.2g", min_excess, half_err);
  return o;
}

Outcome sobolev() {
  Outcome o;
  double min_margin = INFINITY, worst_sharp = 0.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const BranchPoint& b : kGrid) {
    const ExponentContext ctx(b.p);
    const SpectralShift shift(ctx, b.lambda);
    const Mesh mesh(ctx, 1024);
    for (int t = 0; t < 100; ++t) {
      // Random walks, random bumps and random peaks: smooth and rough samples.
      std::vector<double> v(mesh.size(), 0.0);
      const int kind = t % 3;
      const double scale = std::exp(normal(rng));
      for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double x = mesh.node(i) / mesh.length();
        if (kind == 0) v[i] = v[i - 1] + 0.05 * normal(rng);
        if (kind == 1) v[i] = std::sin(std::numbers::pi * x) * (1.0 + 0.3 * normal(rng));
        if (kind == 2) v[i] = std::pow(std::sin(std::numbers::pi * x), 1.0 + t % 7);
      }
      for (double& x : v) x *= scale;
      const SobolevGap g = sobolev_gap(ctx, shift, DiscreteFunction(mesh, v));
      min_margin = std::min(min_margin, (g.gap + g.slack) / std::pow(scale, b.p));
      o.require(g.gap >= -g.slack, fmt("p=%g lambda=%g: gap %.3g below -10/n", b.p, b.lambda, g.gap));
    }
    double prev = INFINITY;
    for (std::size_t n : {1024u, 2048u}) {
      const Mesh m(ctx, n);
      const SobolevGap g = sobolev_gap(ctx, shift, interpolate_minimizer(ctx, shift, m, ctx.half_pi_p()));
      worst_sharp = std::max(worst_sharp, std::abs(g.gap) / g.constant);
      o.require(std::abs(g.gap) < 0.02 * g.constant, fmt("p=%g lambda=%g: sharp gap %.3g", b.p, b.lambda, g.gap));
      o.require(std::abs(g.gap) < prev, fmt("p=%g lambda=%g: gap not shrinking", b.p, b.lambda));
      prev = std::abs(g.gap);
    }
  }
  if (o.pass) o.detail = fmt("random gaps >= -10/n (min margin %.3g); sharp gap <= %.2g C", min_margin, worst_sharp);
  return o;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  std::vector<double> alpha;
  const std::vector<Criterion> criteria{
      {"classical reduction at p = 2", 1, classical_reduction},
      {"lambda = 0 constant and continuity", 1, zero_formula},
      {"identity suites", 10, identities},
      {"integral formulas vs quadrature", 30, integral_formulas},
      {"shooting vs sin_p / sinh_p", 30, ivp_cross_check},
      {"variational reproduction of F", 300, variational_F},
      {"first eigenvalue", 120, first_eigenvalue},
      {"sharpness trend of alpha(delta)", 600, [&] { alpha = alpha_table(); return sharpness(alpha); }},
      {"threshold shooting", 60, [&] { return threshold_shooting(alpha); }},
      {"minimizer outside M(y) for K = 0.75", 1, overshoot_curve},
      {"Sobolev gap", 60, sobolev},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s >= criteria[i].budget_s) o.require(false, fmt("runtime %.3g s over budget %.3g s", s, criteria[i].budget_s));
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %-38s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, s, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}

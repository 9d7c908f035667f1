// Walks one (p, lambda) pair through the library: the sharp constant, the
// pinned minimum at the half period, alpha(delta) for shrinking tents, and a
// shooting check on each side of the threshold.
//
//   threshold_demo [p] [lambda]      (defaults: 3 -2)

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "plyap/shooting.hpp"
#include "plyap/variational.hpp"

int main(int argc, char** argv) {
  const double p = argc > 1 ? std::atof(argv[1]) : 3.0;
  const double lambda = argc > 2 ? std::atof(argv[2]) : -2.0;
  try {
    const plyap::ExponentContext ctx(p);
    const plyap::SpectralShift shift(ctx, lambda);
    const double c = plyap::lyapunov_constant(ctx, shift).value;
    std::printf("p = %g, lambda = %g (%s branch, K = %.6g)\n", p, lambda, plyap::to_string(shift.branch()),
                shift.K());
    std::printf("pi_p = %.12g, C(p, lambda) = %.12g\n\n", ctx.pi_p(), c);

    const plyap::Mesh mesh(ctx, 2048);
    const std::size_t mid = mesh.nearest_node(ctx.half_pi_p());
    const auto pinned =
        plyap::minimize_pinned(ctx, shift, plyap::PinConstraint{mid}, plyap::pinned_tent(mesh, mid));
    std::printf("discrete min of J over u(pi_p/2) = 1: %.12g (%d iterations)\n\n", pinned.objective,
                pinned.iterations);

    std::printf("%8s %16s %14s %14s %14s\n", "delta", "alpha(delta)", "alpha - C", "miss(0.9 C)", "miss(alpha)");
    for (double delta : {0.4, 0.2, 0.1, 0.05}) {
      const plyap::TentProfile tent(ctx, ctx.half_pi_p(), delta);
      const auto a = plyap::alpha_delta(ctx, shift, tent, mesh);
      const auto rep = plyap::verify_lyapunov_threshold(ctx, shift, tent, {0.9 * c, a.alpha}, 20000);
      std::printf("%8g %16.10g %14.6g %14.6g %14.6g\n", delta, a.alpha, a.alpha - c, rep.entries[0].miss,
                  rep.entries[1].miss);
    }
    std::printf("\nBelow C the shot misses; at alpha(delta) it lands on zero, and alpha(delta) -> C.\n");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "threshold_demo: %s\n", e.what());
    return 2;
  }
  return 0;
}

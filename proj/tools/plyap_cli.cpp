// plyap: constants, verification suites and experiments for the
// p-Laplacian Lyapunov problem. See README.md for usage.
//
// Exit codes: 0 success, 1 failed check or non-convergence, 2 usage or
// domain error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plyap/cli/commands.hpp"

namespace {

using namespace plyap::cli;

/// Relative --output paths resolve against $PLYAP_OUTPUT_DIR when it is set.
std::filesystem::path output_path(const std::string& requested) {
  std::filesystem::path path(requested);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("PLYAP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / path;
    }
  }
  return path;
}

int emit(const CommandResult& result, const RunConfig& cfg) {
  const std::string text = encode(result.record, cfg.format);
  if (!cfg.output) {
    std::cout << text << std::flush;
    return result.exit_code;
  }
  const std::filesystem::path path = output_path(*cfg.output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "plyap: cannot write " << path << "\n";
    return kUsageError;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp Lyapunov constants for the one-dimensional p-Laplacian"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying defaults for the global options");

  RunConfig cfg;
  const std::map<std::string, Format> formats{{"text", Format::text}, {"csv", Format::csv}, {"json", Format::json}};
  app.add_option("--p", cfg.p, "exponent p > 1")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "spectral shift lambda < p - 1")->capture_default_str();
  app.add_option("--mesh-n", cfg.mesh_n, "mesh cells (>= 16)")->capture_default_str();
  app.add_option("--steps", cfg.steps, "integration steps (>= 100)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for restarts and random samples")->capture_default_str();
  app.add_option("--format", cfg.format, "text, csv or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->option_text("{text,csv,json} [text]");
  std::string output;
  app.add_option("--output", output, "write here instead of stdout (relative to $PLYAP_OUTPUT_DIR if set)");
  app.add_flag("--allow-nonconverged", cfg.allow_nonconverged, "exit 0 even if a minimization did not converge");
  app.add_flag("--timing", cfg.timing, "include wall time in the record");

  auto* constant = app.add_subcommand("constant", "C(p, lambda) with branch, K, pi_p, lambda_1");

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  Suite suite = Suite::identities;
  const std::map<std::string, Suite> suites{{"identities", Suite::identities},
                                            {"integrals", Suite::integrals},
                                            {"ivp", Suite::ivp},
                                            {"reduction", Suite::reduction}};
  verify->add_option("suite", suite, "identities, integrals, ivp or reduction")
      ->required()
      ->transform(CLI::CheckedTransformer(suites, CLI::ignore_case))
      ->option_text("{identities,integrals,ivp,reduction}");

  auto* minimize = app.add_subcommand("minimize", "minimize J over u(y) = 1");
  double min_y = 0.0;
  minimize->add_option("--y", min_y, "pin location in (0, pi_p)")->required();

  auto* sweep = app.add_subcommand("sweep", "pinned minima over a grid of y in (0, pi_p/2]");
  int y_count = 8;
  sweep->add_option("--y-count", y_count, "number of pins (>= 3)")->capture_default_str();

  auto* sharpness = app.add_subcommand("sharpness", "alpha(delta) for tent potentials");
  std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  std::optional<double> center;
  sharpness->add_option("--deltas", deltas, "tent half-widths")->capture_default_str();
  sharpness->add_option("--center", center, "tent centre (default pi_p/2)");

  auto* shoot = app.add_subcommand("shoot", "miss distance for r = a r_delta");
  ShootArgs shoot_args;
  shoot->add_option("--amplitude", shoot_args.amplitude, "tent amplitude a (default: alpha(delta))");
  shoot->add_option("--delta", shoot_args.delta, "tent half-width")->capture_default_str();
  shoot->add_option("--center", shoot_args.center, "tent centre (default pi_p/2)");

  auto* fig4 = app.add_subcommand("fig4", "sampled pinned minimizer u_y as (x, u) data");
  double fig_y = 0.0;
  fig4->add_option("--y", fig_y, "pin location in (0, pi_p/2]")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsageError;
  }
  if (!output.empty()) cfg.output = output;

  try {
    CommandResult result = [&] {
      if (constant->parsed()) return timed(cfg, [&] { return cmd_constant(cfg); });
      if (verify->parsed()) return timed(cfg, [&] { return cmd_verify(cfg, suite); });
      if (minimize->parsed()) return timed(cfg, [&] { return cmd_minimize(cfg, min_y); });
      if (sweep->parsed()) return timed(cfg, [&] { return cmd_sweep(cfg, y_count); });
      if (sharpness->parsed()) return timed(cfg, [&] { return cmd_sharpness(cfg, deltas, center); });
      if (shoot->parsed()) return timed(cfg, [&] { return cmd_shoot(cfg, shoot_args); });
      return timed(cfg, [&] { return cmd_fig4(cfg, fig_y); });
    }();
    return emit(result, cfg);
  } catch (const std::domain_error& e) {
    std::cerr << "plyap: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::overflow_error& e) {
    std::cerr << "plyap: " << e.what() << "\n";
    return kCheckFailure;
  }
}

// Batch front end: solve / verify / bench / all driven by one config file.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "fplab/checks.hpp"
#include "fplab/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fplab: nonlocal p-Laplacian parabolic solver and estimate checker"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::int64_t seed_override = -1;
  int refine_override = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--out", out_override, "output directory (overrides [output] dir)");
    cmd->add_option("--seed", seed_override, "seed override for kernel modulation and property suites");
    cmd->add_option("--refine", refine_override, "refinement levels (overrides [verify] refine)");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "run the time stepper and persist the trajectory");
  add_common(solve_cmd);

  std::vector<std::string> check_names;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run verification checks");
  add_common(verify_cmd);
  verify_cmd->add_option("check", check_names, "check names (default: those in [verify] checks)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "time tiled vs naive operator application");
  add_common(bench_cmd);

  CLI::App* all_cmd = app.add_subcommand("all", "solve, then run every check");
  add_common(all_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    fplab::RunConfig cfg = fplab::parse_config(config_path);
    if (seed_override >= 0) cfg.kernel.seed = static_cast<std::uint64_t>(seed_override);
    const std::string out = out_override.empty() ? cfg.out_dir : out_override;
    const int refine = refine_override > 0 ? refine_override : cfg.refine;
    const std::uint64_t seed = cfg.kernel.seed;

    if (solve_cmd->parsed()) return fplab::run_solve(cfg, out);
    if (verify_cmd->parsed()) {
      std::vector<std::string> checks = check_names;
      if (checks.empty()) checks = cfg.checks;
      if (checks.size() == 1 && checks[0] == "all") checks = fplab::available_checks();
      if (checks.empty()) {
        std::cerr << "verify: no checks requested (pass names or set [verify] checks)\n";
        return 2;
      }
      return fplab::run_verify(cfg, checks, seed, refine, out);
    }
    if (bench_cmd->parsed()) return fplab::run_bench(cfg, out);
    if (all_cmd->parsed()) return fplab::run_all(cfg, seed, refine, out);
  } catch (const fplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

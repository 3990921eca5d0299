#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fplab/config.hpp"

namespace fplab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string payload_json;  // deterministic report payload (no timings)
};

std::vector<std::string> available_checks();

/// Runs one named check. Throws std::invalid_argument for unknown names.
CheckResult run_check(const std::string& name, const RunConfig& cfg,
                      std::uint64_t seed, int refine, const std::string& out_dir);

/// Subcommand bodies. Each returns a process exit status and writes its
/// outputs under out_dir.
int run_solve(const RunConfig& cfg, const std::string& out_dir);
int run_verify(const RunConfig& cfg, const std::vector<std::string>& checks,
               std::uint64_t seed, int refine, const std::string& out_dir);
int run_bench(const RunConfig& cfg, const std::string& out_dir);
int run_all(const RunConfig& cfg, std::uint64_t seed, int refine,
            const std::string& out_dir);

}  // namespace fplab

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fplab/geometry.hpp"
#include "fplab/kernel.hpp"
#include "fplab/solver.hpp"

namespace fplab {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_, std::string key_)
      : std::runtime_error(msg), line(line_), key(std::move(key_)) {}
  int line;
  std::string key;
};

/// Sum of analytic terms: zero | constant(c) | bump(cx[,cy], r, height).
/// A bump is the C^1 radial profile of the cutoff machinery scaled to height.
struct ScalarFieldSpec {
  struct Term {
    enum class Kind { constant, bump } kind = Kind::constant;
    double value = 0.0;          // constant
    Point center{0, 0};          // bump
    double radius = 0.0;
    double height = 0.0;
  };
  std::vector<Term> terms;

  double eval(const Point& x) const;
  static ScalarFieldSpec parse(const std::string& expr, int dim);
};

/// One config file drives solve, verify and bench runs.
struct RunConfig {
  // [mesh]
  int dim = 1;
  Point lo{0, 0}, hi{0, 0};
  double h = 0.0;
  double r_ext = 0.0;

  // [kernel]
  KernelSpec kernel;

  // [problem]
  ScalarFieldSpec u0, g;
  double g_decay = 0.0;  // g(x,t) = g(x) exp(-g_decay t)
  double horizon = 0.0;
  double dt = 0.0;

  // [solver]
  StepConfig step;

  // [verify]
  std::vector<std::string> checks;
  bool has_cylinder = false;
  Cylinder cylinder;
  std::vector<double> sigmas{0.25, 0.5, 0.75};
  std::vector<double> xis{1.0, 2.0};
  int refine = 1;
  std::size_t trials = 100000;
  double c_p_override = 0.0;  // 0 = use the grid-searched constant

  // [bench]
  std::vector<std::size_t> bench_sizes;
  int bench_repetitions = 3;

  // [output]
  std::string out_dir = "out";
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

/// Mesh/problem at refinement level k: h and dt halved k times.
Mesh make_mesh(const RunConfig& cfg, int refine_level = 0);
ProblemSpec make_problem(const RunConfig& cfg, int refine_level = 0);

}  // namespace fplab

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fplab/geometry.hpp"
#include "fplab/kernel.hpp"
#include "fplab/operator.hpp"

namespace fplab {

/// Initial/exterior-value problem: du/dt + Lu = 0 on the interior, u = g on
/// the exterior band, u(0) = u0.
struct ProblemSpec {
  Mesh mesh;
  KernelSpec kernel;
  std::function<double(const Point&, double)> exterior_data;  // g(x,t)
  std::function<double(const Point&)> initial_data;           // u0(x)
  double horizon = 1.0;  // T
  double dt = 0.1;
};

struct StepConfig {
  double tolerance = 1e-9;   // max-norm of the pointwise Euler residual
  int max_iterations = 4000;
  double shrink = 0.5;       // line-search backtracking factor
  double initial_step = 1.0; // fraction of the diagonal Newton step
  bool warm_start = true;    // start the minimizer from the previous field
};

struct StepDiag {
  int iterations = 0;
  double residual = 0.0;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<Field> fields;    // fields[k].time strictly increasing from 0
  std::vector<StepDiag> diags;  // one per time step (fields.size() - 1)

  std::size_t n_steps() const { return diags.size(); }
  double t_begin() const { return fields.front().time; }
  double t_end() const { return fields.back().time; }
};

struct SolveError : std::runtime_error {
  SolveError(const std::string& msg, double time_, double best_residual_)
      : std::runtime_error(msg), time(time_), best_residual(best_residual_) {}
  double time;
  double best_residual;
};

/// Field with exterior values g(x, t) and interior values from `interior_of`.
Field assemble_field(const ProblemSpec& spec, const Field& interior_of, double t);

/// One backward-Euler step: minimizes the strictly convex step functional
///   (1/(2 dt)) sum_i m_i (v_i - u_prev_i)^2 + (1/2) E(v + g(t_next))
/// over interior values, so the minimizer satisfies
///   (v_i - u_prev_i)/dt + (L v)_i = 0 on interior nodes up to cfg.tolerance.
/// Exterior values are set to g(t_next). Throws SolveError on
/// non-convergence or NaN in the line search.
Field step_implicit(const Field& u_prev, double t_next, const ProblemSpec& spec,
                    const StepConfig& cfg, StepDiag* diag = nullptr);

Trajectory solve(const ProblemSpec& spec, const StepConfig& cfg = {});

struct ContractionReport {
  std::vector<double> distances;  // weighted interior L2 distance squared per time
  bool nonincreasing = true;
  double max_violation = 0.0;
};

/// Runs the problem twice from u0 and alt_u0 with shared exterior data and
/// reports the per-step interior L2 distance between the runs.
ContractionReport l2_contraction_check(
    const ProblemSpec& spec, const std::function<double(const Point&)>& alt_u0,
    const StepConfig& cfg = {});

enum class FieldTransform { identity, positive_part, negative_part };

Trajectory transform_trajectory(const Trajectory& traj, FieldTransform t);

struct SubsolutionReport {
  double rho = 0.0;                 // max over the basis, normalized pairing
  std::vector<double> per_test;     // one value per basis cutoff
  std::size_t basis_size = 0;
};

/// Evaluates the discrete weak-form pairing of the (transformed) trajectory
/// against a fixed basis of nonnegative space-time cutoffs supported in the
/// cylinder: 3 radii x 3 time windows. Each pairing is normalized by the
/// space-time L1 mass of its test field; rho <= tol certifies the discrete
/// subsolution inequality over the tested basis.
SubsolutionReport subsolution_residual(const Trajectory& traj,
                                       const ProblemSpec& spec,
                                       FieldTransform transform,
                                       const Cylinder& cyl);

/// Same, with the default cylinder: the largest ball centered in the domain
/// box that keeps the test functions interior-supported, over the full
/// trajectory time range.
SubsolutionReport subsolution_residual(const Trajectory& traj,
                                       const ProblemSpec& spec,
                                       FieldTransform transform);

}  // namespace fplab

#include "fplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fplab {

namespace {

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

void check_cfg(const StepConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("StepConfig: tolerance must be > 0");
  if (cfg.max_iterations < 1) throw std::invalid_argument("StepConfig: max_iterations must be >= 1");
  if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0))
    throw std::invalid_argument("StepConfig: shrink must lie in (0,1)");
  if (!(cfg.initial_step > 0.0)) throw std::invalid_argument("StepConfig: initial_step must be > 0");
}

double step_objective(const ApplyPlan& plan, const Mesh& mesh,
                      const std::vector<double>& v, const std::vector<double>& u_prev,
                      double dt, double p) {
  double time_term = 0.0;
  for (std::size_t i : mesh.interior_nodes) {
    const double d = v[i] - u_prev[i];
    time_term += mesh.measure[i] * d * d;
  }
  return time_term / (2.0 * dt) + 0.5 * plan.energy(v, p);
}

Field step_with_plan(const ApplyPlan& plan, const Field& u_prev, double t_next,
                     double dt, const ProblemSpec& spec, const StepConfig& cfg,
                     StepDiag* diag) {
  check_cfg(cfg);
  if (!(dt > 0.0)) throw std::invalid_argument("step_implicit: dt must be > 0");
  const Mesh& mesh = spec.mesh;
  const double p = spec.kernel.p;

  Field out = assemble_field(spec, u_prev, t_next);
  if (!cfg.warm_start)
    for (std::size_t i : mesh.interior_nodes) out.values[i] = 0.0;

  std::vector<double>& v = out.values;
  std::vector<double> lv, curvature;
  std::vector<double> residual(mesh.n_nodes(), 0.0);
  std::vector<double> direction(mesh.n_nodes(), 0.0);

  double f_cur = step_objective(plan, mesh, v, u_prev.values, dt, p);
  double alpha = cfg.initial_step;
  const double alpha_cap = cfg.initial_step;  // the diagonal Newton scale
  double best_res = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    plan.apply_with_diag(v, p, lv, curvature);
    double res_norm = 0.0;
    double slope = 0.0;  // <grad F, direction>
    for (std::size_t i : mesh.interior_nodes) {
      const double r = (v[i] - u_prev.values[i]) / dt + lv[i];
      residual[i] = r;
      res_norm = std::max(res_norm, std::abs(r));
      // Newton step on the diagonal of the Hessian m/dt + curvature
      const double h_ii = mesh.measure[i] / dt + curvature[i];
      direction[i] = -mesh.measure[i] * r / h_ii;
      slope += mesh.measure[i] * r * direction[i];
    }
    best_res = std::min(best_res, res_norm);
    if (res_norm <= cfg.tolerance) {
      if (diag) {
        diag->iterations = iter;
        diag->residual = res_norm;
        diag->energy = plan.energy(v, p);
      }
      return out;
    }

    // backtracking; once the objective decrement drops below machine
    // resolution, accept on a strict decrease of the weighted residual norm
    std::vector<double> trial = v;
    bool accepted = false;
    while (alpha > 1e-18) {
      for (std::size_t i : mesh.interior_nodes)
        trial[i] = v[i] + alpha * direction[i];
      const double f_trial = step_objective(plan, mesh, trial, u_prev.values, dt, p);
      if (std::isnan(f_trial))
        throw SolveError("step_implicit: NaN detected during line search", t_next, best_res);
      bool ok = f_trial <= f_cur + 1e-4 * alpha * slope;
      if (!ok) {
        // the objective has hit its roundoff floor; residual monotonicity
        // still identifies progress toward the stationary point
        const std::vector<double> l_trial = plan.apply(trial, p);
        double res_trial = 0.0;
        for (std::size_t i : mesh.interior_nodes)
          res_trial = std::max(
              res_trial, std::abs((trial[i] - u_prev.values[i]) / dt + l_trial[i]));
        ok = res_trial < res_norm * (1.0 - 1e-12);
      }
      if (ok) {
        v.swap(trial);
        f_cur = f_trial;
        alpha = std::min(alpha * 2.0, alpha_cap);
        accepted = true;
        break;
      }
      alpha *= cfg.shrink;
    }
    if (!accepted)
      throw SolveError("step_implicit: line search stalled at t=" + format_time(t_next),
                       t_next, best_res);
  }
  char msg[128];
  std::snprintf(msg, sizeof(msg),
                "step_implicit: no convergence within max iterations at t=%.6g "
                "(best residual %.3e)",
                t_next, best_res);
  throw SolveError(msg, t_next, best_res);
}

ApplyPlan plan_at(const ProblemSpec& spec, double t) {
  return ApplyPlan::build(spec.mesh, spec.kernel, t);
}

}  // namespace

Field assemble_field(const ProblemSpec& spec, const Field& interior_of, double t) {
  Field out;
  out.time = t;
  out.values.resize(spec.mesh.n_nodes());
  for (std::size_t i = 0; i < spec.mesh.n_nodes(); ++i)
    out.values[i] = spec.mesh.interior[i] ? interior_of.values[i]
                                          : spec.exterior_data(spec.mesh.point(i), t);
  return out;
}

Field step_implicit(const Field& u_prev, double t_next, const ProblemSpec& spec,
                    const StepConfig& cfg, StepDiag* diag) {
  const ApplyPlan plan = plan_at(spec, t_next);
  return step_with_plan(plan, u_prev, t_next, spec.dt, spec, cfg, diag);
}

Trajectory solve(const ProblemSpec& spec, const StepConfig& cfg) {
  if (!(spec.dt > 0.0) || !(spec.horizon > 0.0))
    throw std::invalid_argument("solve: horizon and dt must be positive");

  Trajectory traj;
  Field init;
  init.time = 0.0;
  init.values.resize(spec.mesh.n_nodes(), 0.0);
  for (std::size_t i : spec.mesh.interior_nodes)
    init.values[i] = spec.initial_data(spec.mesh.point(i));
  traj.fields.push_back(assemble_field(spec, init, 0.0));

  const bool fixed_kernel = !spec.kernel.time_dependent();
  ApplyPlan plan;
  if (fixed_kernel) plan = plan_at(spec, 0.0);

  const int n_steps = static_cast<int>(std::ceil(spec.horizon / spec.dt - 1e-9));
  double t = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    const double t_next = std::min(k * spec.dt, spec.horizon);
    const double dt = t_next - t;
    if (!fixed_kernel) plan = plan_at(spec, t_next);
    StepDiag diag;
    Field next = step_with_plan(plan, traj.fields.back(), t_next, dt, spec, cfg, &diag);
    traj.fields.push_back(std::move(next));
    traj.diags.push_back(diag);
    t = t_next;
  }
  return traj;
}

ContractionReport l2_contraction_check(
    const ProblemSpec& spec, const std::function<double(const Point&)>& alt_u0,
    const StepConfig& cfg) {
  const Trajectory a = solve(spec, cfg);
  ProblemSpec spec_b = spec;
  spec_b.initial_data = alt_u0;
  const Trajectory b = solve(spec_b, cfg);

  ContractionReport rep;
  double mass = 0.0;
  for (std::size_t i : spec.mesh.interior_nodes) mass += spec.mesh.measure[i];

  for (std::size_t k = 0; k < a.fields.size(); ++k) {
    double d2 = 0.0;
    for (std::size_t i : spec.mesh.interior_nodes) {
      const double d = a.fields[k].values[i] - b.fields[k].values[i];
      d2 += spec.mesh.measure[i] * d * d;
    }
    rep.distances.push_back(d2);
  }
  for (std::size_t k = 0; k + 1 < rep.distances.size(); ++k) {
    const double prev = rep.distances[k];
    const double next = rep.distances[k + 1];
    // inexact steps shift each run by at most dt * tolerance per node
    const double eps = 2.0 * cfg.tolerance * spec.dt * std::sqrt(mass);
    const double slack = 1e-10 * prev + 2.0 * std::sqrt(prev) * eps + eps * eps;
    const double violation = next - prev;
    if (violation > slack) {
      rep.nonincreasing = false;
      rep.max_violation = std::max(rep.max_violation, violation);
    }
  }
  return rep;
}

Trajectory transform_trajectory(const Trajectory& traj, FieldTransform t) {
  if (t == FieldTransform::identity) return traj;
  Trajectory out = traj;
  for (Field& f : out.fields)
    f = (t == FieldTransform::positive_part) ? positive_part(f) : negative_part(f);
  return out;
}

SubsolutionReport subsolution_residual(const Trajectory& traj,
                                       const ProblemSpec& spec,
                                       FieldTransform transform,
                                       const Cylinder& cyl) {
  const Mesh& mesh = spec.mesh;
  const double p = spec.kernel.p;
  const Trajectory w = transform_trajectory(traj, transform);

  // 3 radii x 3 time windows of product cutoffs supported in the cylinder
  std::vector<CutoffSpec> basis;
  for (double rf : {0.5, 0.75, 1.0}) {
    const double r_out = rf * cyl.r;
    for (double a : {0.05, 0.35, 0.65}) {
      const double t_out = cyl.t_start() + a * cyl.duration;
      const double t_in = t_out + 0.2 * cyl.duration;
      basis.push_back(build_cutoff(0.6 * r_out, r_out, t_out, t_in, cyl.x0));
    }
  }

  SubsolutionReport rep;
  rep.basis_size = basis.size();
  std::vector<double> pairing(basis.size(), 0.0);
  std::vector<double> l1_mass(basis.size(), 0.0);

  const bool fixed_kernel = !spec.kernel.time_dependent();
  ApplyPlan plan;
  if (fixed_kernel) plan = ApplyPlan::build(mesh, spec.kernel, 0.0);

  for (std::size_t k = 1; k < w.fields.size(); ++k) {
    const double tk = w.fields[k].time;
    if (tk <= cyl.t_start() + 1e-14 || tk > cyl.t1 + 1e-12) continue;
    const double dt = tk - w.fields[k - 1].time;
    if (!fixed_kernel) plan = ApplyPlan::build(mesh, spec.kernel, tk);
    const std::vector<double> lw = plan.apply(w.fields[k].values, p);

    for (std::size_t b = 0; b < basis.size(); ++b) {
      double pair_k = 0.0, mass_k = 0.0;
      for (std::size_t i : mesh.interior_nodes) {
        const double eta = basis[b].phi(mesh.point(i), tk);
        if (eta == 0.0) continue;
        const double du = (w.fields[k].values[i] - w.fields[k - 1].values[i]) / dt;
        pair_k += mesh.measure[i] * (du + lw[i]) * eta;
        mass_k += mesh.measure[i] * eta;
      }
      pairing[b] += dt * pair_k;
      l1_mass[b] += dt * mass_k;
    }
  }

  rep.per_test.resize(basis.size(), 0.0);
  rep.rho = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < basis.size(); ++b) {
    rep.per_test[b] = l1_mass[b] > 0.0 ? pairing[b] / l1_mass[b] : 0.0;
    rep.rho = std::max(rep.rho, rep.per_test[b]);
  }
  return rep;
}

SubsolutionReport subsolution_residual(const Trajectory& traj,
                                       const ProblemSpec& spec,
                                       FieldTransform transform) {
  const Mesh& mesh = spec.mesh;
  double rmin = std::numeric_limits<double>::infinity();
  for (int d = 0; d < mesh.dim; ++d)
    rmin = std::min(rmin, 0.5 * (mesh.hi[d] - mesh.lo[d]));
  Cylinder cyl;
  cyl.x0 = mesh.center;
  cyl.r = 0.9 * rmin;
  cyl.t1 = traj.t_end();
  cyl.duration = traj.t_end() - traj.t_begin();
  return subsolution_residual(traj, spec, transform, cyl);
}

}  // namespace fplab

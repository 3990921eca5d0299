#pragma once

#include <cstdint>
#include <vector>

#include "fplab/geometry.hpp"
#include "fplab/kernel.hpp"
#include "fplab/operator.hpp"
#include "fplab/solver.hpp"

namespace fplab {

enum class TailVariant { average, supremum };

/// Far-field mass of a trajectory outside a ball, with the analytic remainder
/// certificate for the unmeshed region (assuming |v| there is bounded by its
/// observed max on the exterior band). total = value + remainder is an upper
/// bound.
struct TailEstimate {
  double value = 0.0;
  double remainder = 0.0;
  double total = 0.0;
  TailVariant variant = TailVariant::average;
  Cylinder cylinder;
};

TailEstimate tail(const Trajectory& traj, const Mesh& mesh, const Point& x0,
                  double r, double duration, double t1, TailVariant variant,
                  double s, double p);

/// d = tail_inf((u)_+; x0, sigma r, t0-T0, t0) + (r^{sp}/T0)^{1/(p-2)}.
/// Requires p > 2.
double offset_d(const Trajectory& traj, const Mesh& mesh, const Cylinder& q,
                double sigma, double s, double p);

/// Both sides of the energy (Caccioppoli) inequality for v = u + d and
/// w = v^{(p-1+xi)/p}, evaluated on a cylinder with a product cutoff.
/// The right-hand side's kernel-free terms use the upper-sandwich measure
/// lambda |x-y|^{-(n+sp)}; exterior kernel masses carry the analytic
/// beyond-mesh remainder.
struct CaccioppoliReport {
  double xi = 0.0;
  double d = 0.0;
  double l1 = 0.0;  // cutoff-localized seminorm of w
  double l2 = 0.0;  // sup-in-time zero-order term
  double r1 = 0.0;  // max{w(x),w(y)}^p |delta phi|^p against the upper kernel
  double r2 = 0.0;  // exterior kernel mass x localized w^p mass
  double r3 = 0.0;  // tail-weighted v^xi term
  double r4 = 0.0;  // (d phi^p/dt)_+ term
  double c_emp = 0.0;
};

CaccioppoliReport caccioppoli_report(const Trajectory& traj, const Mesh& mesh,
                                     const KernelSpec& kernel, const Cylinder& q,
                                     const CutoffSpec& cutoff, double xi, double d);

/// Exponent ladder for the iteration turning the reverse Hoelder inequality
/// into a sup bound: xi_j = gamma^j (xi_0 + 1) - 1, p_j = p - 1 + xi_j.
struct MoserLadder {
  int n = 0;
  double s = 0.0, p = 0.0, xi0 = 0.0;
  double kappa_star = 0.0;  // n/(n-sp)
  double g_exponent = 0.0;  // kappa*/(kappa*-1)
  double gamma = 0.0;       // 1 + 1/G = (n+sp)/n
  double kappa = 0.0;       // 1 + (1+xi0)/(G(p-1+xi0))
  double alpha = 0.0;       // (n+sp)^2/sp
  double alpha_final = 0.0; // (n+sp)(n+sp+sn)/sp
  std::vector<double> xi;   // xi_0 .. xi_levels
  std::vector<double> pj;   // p_0 .. p_levels
};

MoserLadder moser_ladder(int n, double s, double p, double xi0, int levels = 8);

struct Rational {
  long long num = 0;
  long long den = 1;
};

/// Verifies the ladder recursions xi_{j+1} = gamma (xi_j + 1) - 1 and
/// p - 1 + sp/n + gamma xi_j = p_{j+1}, gamma = (n+sp)/n, and the window
/// kappa in (1, kappa*), in exact rational arithmetic.
bool moser_ladder_identities_exact(int n, Rational s, Rational p, Rational xi0,
                                   int levels = 8);

enum class BoundednessMode { nonneg_subsolution, unsigned_solution };

/// Two sides of the local-boundedness estimate on sigma Q vs Q, with the
/// empirical constant. p > 2 and sigma in (0,1) required; the trajectory must
/// cover 2Q. tail_sigma_r is used in the bound; tail_full_r is reported
/// alongside (radius-convention comparison).
struct BoundednessReport {
  Cylinder q;
  double sigma = 0.0;
  BoundednessMode mode = BoundednessMode::nonneg_subsolution;
  double lhs = 0.0;         // sup over sigma Q
  double term_scale = 0.0;  // (R^{sp}/T0)^{1/(p-2)}
  double term_tail = 0.0;   // (T0/R^{sp}) tail_inf^{p-1}
  double term_avg = 0.0;    // (T0/R^{sp}) (sup_t avg_{B_R})^{p-1}
  double prefactor = 0.0;   // (1-sigma)^{-alpha_final}
  double rhs = 0.0;         // prefactor * (scale + tail + avg)
  double c_emp = 0.0;
  double tail_sigma_r = 0.0;
  double tail_full_r = 0.0;
};

BoundednessReport boundedness_check(const Trajectory& traj, const Mesh& mesh,
                                    const Cylinder& q, double sigma,
                                    BoundednessMode mode, double s, double p);

struct DkpConstant {
  double p = 0.0;
  double c_p = 0.0;    // smallest constant working on the searched set
  double delta = 0.0;  // 1/(4 c_p)
};

struct InequalityReport {
  std::size_t trials = 0;
  std::size_t violations_power_diff = 0;  // |a|^{p-2}a - |b|^{p-2}b vs |a-b|^{p-2}(a-b)
  std::size_t violations_superadditive = 0;  // a^s + b^s vs (a+b)^s
  std::size_t violations_cutoff = 0;         // cutoff inequality at recovered c_p
  double max_margin_power_diff = 0.0;
  double max_margin_superadditive = 0.0;
  std::vector<DkpConstant> cutoff_constants;  // p in {2, 2.5, 3, 4}
  bool pass = false;
};

/// Randomized audit of the elementary inequalities used by the estimates,
/// plus grid-search recovery of the cutoff inequality constant per p.
InequalityReport inequality_suite(std::uint64_t seed, std::size_t trials);

struct TailAuditReport {
  double g_weighted_mass = 0.0;     // sup_t sum |g|^{p-1}/(1+|x-x0|^{n+sp})
  double g_weighted_mass_2r = 0.0;  // same with the band extended to 2 R_ext
  double rel_change = 0.0;
  bool flagged = false;             // rel_change >= 5%: non-integrable exterior data
  double interior_lq_mass = 0.0;    // sup_t sum_interior |u|^q
  double local_sup_mass = 0.0;      // sup_t sum_{B_{r/2}} |u|^p
  double q = 0.0;
};

/// Growth audit of the quantities controlling tail finiteness. q defaults to
/// the kernel's p when <= 0.
TailAuditReport tail_finiteness_audit(const Trajectory& traj,
                                      const ProblemSpec& spec, double q = -1.0);

}  // namespace fplab

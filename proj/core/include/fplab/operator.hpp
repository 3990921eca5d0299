#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fplab/geometry.hpp"
#include "fplab/kernel.hpp"

namespace fplab {

/// Nodal values on the whole mesh (interior + exterior band) at one time.
struct Field {
  std::vector<double> values;
  double time = 0.0;
};

Field constant_field(const Mesh& mesh, double c, double t = 0.0);
Field positive_part(const Field& u);
Field negative_part(const Field& u);         // (-u)_+
Field truncate(const Field& u, double m);    // min{u, m}

/// Precomputed pairwise weights K(x_i,x_j,t) m_i m_j for the nonlocal sums.
/// Only i < j is stored, grouped in cache-sized tiles; both contributions of
/// a pair are scattered during application. The tile walk order is fixed, so
/// results are deterministic.
class ApplyPlan {
 public:
  static constexpr std::size_t tile = 256;

  static ApplyPlan build(const Mesh& mesh, const KernelSpec& kernel, double t);

  std::size_t n_nodes() const { return n_; }
  double time() const { return t_; }

  /// (Lu)_i = sum_{j != i} |u_i-u_j|^{p-2}(u_i-u_j) K_ij m_j, all nodes.
  std::vector<double> apply(std::span<const double> u, double p) const;

  /// Same pass, also accumulating the diagonal of the linearization
  /// (p-1) sum_j |u_i-u_j|^{p-2} K_ij m_i m_j (used to precondition solves).
  void apply_with_diag(std::span<const double> u, double p,
                       std::vector<double>& lu, std::vector<double>& diag) const;

  /// E(u) = (1/p) sum_{i != j} |u_i-u_j|^p K_ij m_i m_j  (ordered pairs).
  double energy(std::span<const double> u, double p) const;

  /// Dense N x N weight matrix K_ij m_i m_j (zero diagonal). Test/debug use.
  std::vector<double> reconstruct_dense() const;

  const std::vector<double>& measures() const { return measure_; }

 private:
  std::size_t n_ = 0;
  double t_ = 0.0;
  std::vector<double> measure_;
  std::vector<double> weights_;  // tile-grouped, i<j once
};

Field apply_L(const ApplyPlan& plan, const Field& u, double p);

/// Reference double loop evaluating the kernel on the fly. Oracle and
/// benchmark baseline for the tiled plan.
Field apply_L_naive(const Mesh& mesh, const KernelSpec& kernel, const Field& u,
                    double p, double t);

double energy(const ApplyPlan& plan, const Field& u, double p);

/// Gagliardo double sum over a node set:
///   sum_{i != j in region} |u_i-u_j|^p / |x_i-x_j|^{n+sp} m_i m_j.
/// This is the p-th power form of the fractional seminorm, matching the
/// convention used throughout the estimate reports.
double seminorm(const Mesh& mesh, const Field& u,
                std::span<const std::size_t> region, double s, double p);

/// ||u||_{L^q}^p / seminorm(u) for fields vanishing on the exterior band.
/// Returns 0 for the zero field.
double sobolev_ratio(const Mesh& mesh, const Field& u, double q, double s, double p);

struct ApplyBenchReport {
  std::size_t n = 0;
  int repetitions = 0;
  double tiled_seconds = 0.0;   // best-of-repetitions wall time
  double naive_seconds = 0.0;
  double plan_build_seconds = 0.0;
  double max_rel_diff = 0.0;    // tiled vs naive
  bool agree = false;           // max_rel_diff <= 1e-12
  double speedup = 0.0;         // naive / tiled
};

/// Times tiled vs naive application on a seeded random field and cross-checks
/// that they agree. Throws if repetitions < 1.
ApplyBenchReport benchmark_apply(const Mesh& mesh, const KernelSpec& kernel,
                                 double p, int repetitions,
                                 std::uint64_t seed = 2024);

}  // namespace fplab

#include "fplab/operator.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fplab {

namespace {

// |d|^{p-2} d with branch-free fast paths for the common exponents.
struct PhiP2 {
  static double phi(double d) { return d; }
  static double pw(double d) { return d * d; }
  static double dphi(double) { return 1.0; }
};
struct PhiP3 {
  static double phi(double d) { return std::abs(d) * d; }
  static double pw(double d) { return std::abs(d) * d * d; }
  static double dphi(double d) { return 2.0 * std::abs(d); }
};
struct PhiP4 {
  static double phi(double d) { return d * d * d; }
  static double pw(double d) { double q = d * d; return q * q; }
  static double dphi(double d) { return 3.0 * d * d; }
};
struct PhiGeneric {
  double pm2, p;
  double phi(double d) const { return d == 0.0 ? 0.0 : std::pow(std::abs(d), pm2) * d; }
  double pw(double d) const { return d == 0.0 ? 0.0 : std::pow(std::abs(d), p); }
  double dphi(double d) const {
    return d == 0.0 ? 0.0 : (p - 1.0) * std::pow(std::abs(d), pm2);
  }
};

double phi_p(double d, double p) {
  if (p == 2.0) return PhiP2::phi(d);
  if (p == 3.0) return PhiP3::phi(d);
  if (p == 4.0) return PhiP4::phi(d);
  return PhiGeneric{p - 2.0, p}.phi(d);
}

void check_p(double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("nonlocal operator: p must be >= 2");
}

}  // namespace

Field constant_field(const Mesh& mesh, double c, double t) {
  return Field{std::vector<double>(mesh.n_nodes(), c), t};
}

Field positive_part(const Field& u) {
  Field out = u;
  for (double& v : out.values) v = std::max(v, 0.0);
  return out;
}

Field negative_part(const Field& u) {
  Field out = u;
  for (double& v : out.values) v = std::max(-v, 0.0);
  return out;
}

Field truncate(const Field& u, double m) {
  Field out = u;
  for (double& v : out.values) v = std::min(v, m);
  return out;
}

ApplyPlan ApplyPlan::build(const Mesh& mesh, const KernelSpec& kernel, double t) {
  ApplyPlan plan;
  plan.n_ = mesh.n_nodes();
  plan.t_ = t;
  plan.measure_ = mesh.measure;

  const std::size_t n = plan.n_;
  plan.weights_.resize(n * (n - 1) / 2);
  const double expo = -(mesh.dim + kernel.s * kernel.p);
  const bool modulated = kernel.form == KernelSpec::Form::modulated;

  std::size_t k = 0;
  for (std::size_t I = 0; I < n; I += tile) {
    for (std::size_t J = I; J < n; J += tile) {
      const std::size_t iend = std::min(I + tile, n);
      const std::size_t jend = std::min(J + tile, n);
      for (std::size_t i = I; i < iend; ++i) {
        const Point& xi = mesh.point(i);
        const double mi = mesh.measure[i];
        for (std::size_t j = std::max(J, i + 1); j < jend; ++j) {
          const double r = dist(xi, mesh.point(j));
          double w = std::pow(r, expo) * mi * mesh.measure[j];
          if (modulated) w *= kernel.modulation(xi, mesh.point(j), t);
          plan.weights_[k++] = w;
        }
      }
    }
  }
  return plan;
}

namespace {

template <class Phi>
void apply_tiled(const Phi& op, std::size_t n, const std::vector<double>& w,
                 std::span<const double> u, std::vector<double>& acc) {
  constexpr std::size_t tile = ApplyPlan::tile;
  std::size_t k = 0;
  for (std::size_t I = 0; I < n; I += tile) {
    for (std::size_t J = I; J < n; J += tile) {
      const std::size_t iend = std::min(I + tile, n);
      const std::size_t jend = std::min(J + tile, n);
      for (std::size_t i = I; i < iend; ++i) {
        const double ui = u[i];
        double ai = 0.0;
        for (std::size_t j = std::max(J, i + 1); j < jend; ++j) {
          const double contrib = w[k++] * op.phi(ui - u[j]);
          ai += contrib;
          acc[j] -= contrib;
        }
        acc[i] += ai;
      }
    }
  }
}

template <class Phi>
void apply_diag_tiled(const Phi& op, std::size_t n, const std::vector<double>& w,
                      std::span<const double> u, std::vector<double>& acc,
                      std::vector<double>& diag) {
  constexpr std::size_t tile = ApplyPlan::tile;
  std::size_t k = 0;
  for (std::size_t I = 0; I < n; I += tile) {
    for (std::size_t J = I; J < n; J += tile) {
      const std::size_t iend = std::min(I + tile, n);
      const std::size_t jend = std::min(J + tile, n);
      for (std::size_t i = I; i < iend; ++i) {
        const double ui = u[i];
        double ai = 0.0, di = 0.0;
        for (std::size_t j = std::max(J, i + 1); j < jend; ++j) {
          const double wij = w[k++];
          const double d = ui - u[j];
          const double contrib = wij * op.phi(d);
          const double curvature = wij * op.dphi(d);
          ai += contrib;
          acc[j] -= contrib;
          di += curvature;
          diag[j] += curvature;
        }
        acc[i] += ai;
        diag[i] += di;
      }
    }
  }
}

template <class Phi>
double energy_tiled(const Phi& op, std::size_t n, const std::vector<double>& w,
                    std::span<const double> u) {
  constexpr std::size_t tile = ApplyPlan::tile;
  std::size_t k = 0;
  double e = 0.0;
  for (std::size_t I = 0; I < n; I += tile) {
    for (std::size_t J = I; J < n; J += tile) {
      const std::size_t iend = std::min(I + tile, n);
      const std::size_t jend = std::min(J + tile, n);
      for (std::size_t i = I; i < iend; ++i) {
        const double ui = u[i];
        double ei = 0.0;
        for (std::size_t j = std::max(J, i + 1); j < jend; ++j)
          ei += w[k++] * op.pw(ui - u[j]);
        e += ei;
      }
    }
  }
  return e;
}

}  // namespace

std::vector<double> ApplyPlan::apply(std::span<const double> u, double p) const {
  check_p(p);
  if (u.size() != n_) throw std::invalid_argument("ApplyPlan::apply: field/mesh size mismatch");
  std::vector<double> acc(n_, 0.0);
  if (p == 2.0) apply_tiled(PhiP2{}, n_, weights_, u, acc);
  else if (p == 3.0) apply_tiled(PhiP3{}, n_, weights_, u, acc);
  else if (p == 4.0) apply_tiled(PhiP4{}, n_, weights_, u, acc);
  else apply_tiled(PhiGeneric{p - 2.0, p}, n_, weights_, u, acc);
  for (std::size_t i = 0; i < n_; ++i) acc[i] /= measure_[i];
  return acc;
}

void ApplyPlan::apply_with_diag(std::span<const double> u, double p,
                                std::vector<double>& lu,
                                std::vector<double>& diag) const {
  check_p(p);
  if (u.size() != n_)
    throw std::invalid_argument("ApplyPlan::apply_with_diag: field/mesh size mismatch");
  lu.assign(n_, 0.0);
  diag.assign(n_, 0.0);
  if (p == 2.0) apply_diag_tiled(PhiP2{}, n_, weights_, u, lu, diag);
  else if (p == 3.0) apply_diag_tiled(PhiP3{}, n_, weights_, u, lu, diag);
  else if (p == 4.0) apply_diag_tiled(PhiP4{}, n_, weights_, u, lu, diag);
  else apply_diag_tiled(PhiGeneric{p - 2.0, p}, n_, weights_, u, lu, diag);
  for (std::size_t i = 0; i < n_; ++i) lu[i] /= measure_[i];
}

double ApplyPlan::energy(std::span<const double> u, double p) const {
  check_p(p);
  if (u.size() != n_) throw std::invalid_argument("ApplyPlan::energy: field/mesh size mismatch");
  double e = 0.0;
  if (p == 2.0) e = energy_tiled(PhiP2{}, n_, weights_, u);
  else if (p == 3.0) e = energy_tiled(PhiP3{}, n_, weights_, u);
  else if (p == 4.0) e = energy_tiled(PhiP4{}, n_, weights_, u);
  else e = energy_tiled(PhiGeneric{p - 2.0, p}, n_, weights_, u);
  return 2.0 * e / p;  // ordered pairs
}

std::vector<double> ApplyPlan::reconstruct_dense() const {
  std::vector<double> dense(n_ * n_, 0.0);
  constexpr std::size_t t = tile;
  std::size_t k = 0;
  for (std::size_t I = 0; I < n_; I += t) {
    for (std::size_t J = I; J < n_; J += t) {
      const std::size_t iend = std::min(I + t, n_);
      const std::size_t jend = std::min(J + t, n_);
      for (std::size_t i = I; i < iend; ++i) {
        for (std::size_t j = std::max(J, i + 1); j < jend; ++j) {
          dense[i * n_ + j] = weights_[k];
          dense[j * n_ + i] = weights_[k];
          ++k;
        }
      }
    }
  }
  return dense;
}

Field apply_L(const ApplyPlan& plan, const Field& u, double p) {
  return Field{plan.apply(u.values, p), plan.time()};
}

Field apply_L_naive(const Mesh& mesh, const KernelSpec& kernel, const Field& u,
                    double p, double t) {
  check_p(p);
  const std::size_t n = mesh.n_nodes();
  if (u.values.size() != n)
    throw std::invalid_argument("apply_L_naive: field/mesh size mismatch");
  Field out{std::vector<double>(n, 0.0), t};
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;  // principal value: the diagonal is omitted
      const double d = u.values[i] - u.values[j];
      acc += phi_p(d, p) * kernel.eval(mesh.dim, mesh.point(i), mesh.point(j), t) *
             mesh.measure[j];
    }
    out.values[i] = acc;
  }
  return out;
}

double energy(const ApplyPlan& plan, const Field& u, double p) {
  return plan.energy(u.values, p);
}

double seminorm(const Mesh& mesh, const Field& u,
                std::span<const std::size_t> region, double s, double p) {
  if (region.empty()) throw std::invalid_argument("seminorm: empty region");
  const double expo = -(mesh.dim + s * p);
  double acc = 0.0;
  for (std::size_t a = 0; a < region.size(); ++a) {
    const std::size_t i = region[a];
    for (std::size_t b = a + 1; b < region.size(); ++b) {
      const std::size_t j = region[b];
      const double d = u.values[i] - u.values[j];
      if (d == 0.0) continue;
      const double r = dist(mesh.point(i), mesh.point(j));
      acc += std::pow(std::abs(d), p) * std::pow(r, expo) * mesh.measure[i] *
             mesh.measure[j];
    }
  }
  return 2.0 * acc;
}

double sobolev_ratio(const Mesh& mesh, const Field& u, double q, double s, double p) {
  const int n = mesh.dim;
  const double sp = s * p;
  if (sp > n + 1e-12)
    throw std::invalid_argument("sobolev_ratio: sp > n is outside the embedding range");
  if (!(q >= p))
    throw std::invalid_argument("sobolev_ratio: q must be >= p");
  if (sp < n - 1e-12) {
    const double q_max = n * p / (n - sp);
    if (q > q_max + 1e-12)
      throw std::invalid_argument("sobolev_ratio: q beyond the critical exponent");
  }
  for (std::size_t e : mesh.exterior_nodes)
    if (u.values[e] != 0.0)
      throw std::invalid_argument("sobolev_ratio: field must vanish on the exterior band");

  double lq = 0.0;
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i)
    lq += std::pow(std::abs(u.values[i]), q) * mesh.measure[i];
  if (lq == 0.0) return 0.0;
  const auto all = mesh.all_nodes();
  const double semi = seminorm(mesh, u, all, s, p);
  if (semi == 0.0) return 0.0;
  return std::pow(std::pow(lq, 1.0 / q), p) / semi;
}

ApplyBenchReport benchmark_apply(const Mesh& mesh, const KernelSpec& kernel,
                                 double p, int repetitions, std::uint64_t seed) {
  if (repetitions < 1)
    throw std::invalid_argument("benchmark_apply: repetitions must be >= 1");
  using clock = std::chrono::steady_clock;
  const std::size_t n = mesh.n_nodes();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field u{std::vector<double>(n), 0.0};
  for (double& v : u.values) v = uni(rng);

  ApplyBenchReport rep;
  rep.n = n;
  rep.repetitions = repetitions;

  auto t0 = clock::now();
  const ApplyPlan plan = ApplyPlan::build(mesh, kernel, 0.0);
  rep.plan_build_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  Field tiled;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repetitions; ++r) {
    auto a = clock::now();
    tiled = apply_L(plan, u, p);
    best = std::min(best, std::chrono::duration<double>(clock::now() - a).count());
  }
  rep.tiled_seconds = best;

  Field naive;
  best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repetitions; ++r) {
    auto a = clock::now();
    naive = apply_L_naive(mesh, kernel, u, p, 0.0);
    best = std::min(best, std::chrono::duration<double>(clock::now() - a).count());
  }
  rep.naive_seconds = best;

  double scale = 0.0;
  for (double v : naive.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    rep.max_rel_diff =
        std::max(rep.max_rel_diff, std::abs(tiled.values[i] - naive.values[i]) / scale);
  rep.agree = rep.max_rel_diff <= 1e-12;
  rep.speedup = rep.naive_seconds / rep.tiled_seconds;
  return rep;
}

}  // namespace fplab

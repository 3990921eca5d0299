#include "fplab/estimates.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fplab {

namespace {

double sphere_measure(int n) { return n == 1 ? 2.0 : 2.0 * M_PI; }

// Inscribed radius of the meshed box around x0: beyond it the mesh has no data.
double coverage_radius(const Mesh& mesh, const Point& x0) {
  double r = std::numeric_limits<double>::infinity();
  for (int d = 0; d < mesh.dim; ++d) {
    r = std::min(r, x0[d] - mesh.outer_lo[d]);
    r = std::min(r, mesh.outer_hi[d] - x0[d]);
  }
  return r;
}

// Overlap of (a, b] with (lo, hi).
double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

void check_window(const Trajectory& traj, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("estimates: empty time window");
  if (lo < traj.t_begin() - 1e-12 || hi > traj.t_end() + 1e-12)
    throw std::invalid_argument("estimates: time window not covered by the trajectory");
}

}  // namespace

TailEstimate tail(const Trajectory& traj, const Mesh& mesh, const Point& x0,
                  double r, double duration, double t1, TailVariant variant,
                  double s, double p) {
  if (!mesh.contains_ball(x0, r))
    throw std::invalid_argument("tail: ball exceeds the meshed region");
  const double lo = t1 - duration;
  check_window(traj, lo, t1);

  const double sp = s * p;
  const double expo = -(mesh.dim + sp);
  const auto outside = mesh.outside_ball(x0, r);

  // per-snapshot integrand sum_{|x - x0| >= r} |v|^{p-1} |x - x0|^{-(n+sp)} m
  auto integrand = [&](const Field& f) {
    double acc = 0.0;
    for (std::size_t i : outside) {
      const double dist_i = dist(mesh.point(i), x0);
      acc += std::pow(std::abs(f.values[i]), p - 1.0) * std::pow(dist_i, expo) *
             mesh.measure[i];
    }
    return acc;
  };

  double inner = 0.0;       // the (...)^{p-1} content
  double band_max = 0.0;    // observed max |v| on the exterior band, in-window
  bool any_snapshot = false;
  if (variant == TailVariant::average) {
    double time_integral = 0.0;
    for (std::size_t k = 1; k < traj.fields.size(); ++k) {
      const double w = overlap(traj.fields[k - 1].time, traj.fields[k].time, lo, t1);
      if (w <= 0.0) continue;
      time_integral += w * integrand(traj.fields[k]);
      any_snapshot = true;
      for (std::size_t e : mesh.exterior_nodes)
        band_max = std::max(band_max, std::abs(traj.fields[k].values[e]));
    }
    // single-snapshot trajectories: treat the field as constant in time
    if (traj.fields.size() == 1) {
      time_integral = duration * integrand(traj.fields[0]);
      any_snapshot = true;
      for (std::size_t e : mesh.exterior_nodes)
        band_max = std::max(band_max, std::abs(traj.fields[0].values[e]));
    }
    inner = std::pow(r, sp) / duration * time_integral;
  } else {
    double sup = 0.0;
    for (const Field& f : traj.fields) {
      if (f.time < lo - 1e-12 || f.time > t1 + 1e-12) continue;
      sup = std::max(sup, integrand(f));
      any_snapshot = true;
      for (std::size_t e : mesh.exterior_nodes)
        band_max = std::max(band_max, std::abs(f.values[e]));
    }
    inner = std::pow(r, sp) * sup;
  }
  if (!any_snapshot)
    throw std::invalid_argument("tail: no trajectory snapshot inside the time window");

  const double rho = std::max(coverage_radius(mesh, x0), r);
  const double remainder_inner = std::pow(r, sp) * std::pow(band_max, p - 1.0) *
                                 sphere_measure(mesh.dim) * std::pow(rho, -sp) / sp;

  TailEstimate est;
  est.variant = variant;
  est.cylinder = Cylinder{x0, r, t1, duration};
  est.value = std::pow(inner, 1.0 / (p - 1.0));
  est.remainder = std::pow(remainder_inner, 1.0 / (p - 1.0));
  est.total = est.value + est.remainder;  // subadditivity of x^{1/(p-1)}, p >= 2
  return est;
}

double offset_d(const Trajectory& traj, const Mesh& mesh, const Cylinder& q,
                double sigma, double s, double p) {
  if (!(p > 2.0)) throw std::invalid_argument("offset_d: requires p > 2");
  const Trajectory up = transform_trajectory(traj, FieldTransform::positive_part);
  const TailEstimate t_inf = tail(up, mesh, q.x0, sigma * q.r, q.duration, q.t1,
                                  TailVariant::supremum, s, p);
  return t_inf.total + std::pow(std::pow(q.r, s * p) / q.duration, 1.0 / (p - 2.0));
}

CaccioppoliReport caccioppoli_report(const Trajectory& traj, const Mesh& mesh,
                                     const KernelSpec& kernel, const Cylinder& q,
                                     const CutoffSpec& cutoff, double xi, double d) {
  if (!(xi >= 1.0)) throw std::invalid_argument("caccioppoli_report: xi must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("caccioppoli_report: d must be > 0");
  if (dist(cutoff.x0, q.x0) + cutoff.r_out > q.r + 1e-12)
    throw std::invalid_argument("caccioppoli_report: cutoff support exceeds the cylinder");
  if (cutoff.t_out < q.t_start() - 1e-12)
    throw std::invalid_argument("caccioppoli_report: cutoff time ramp exceeds the cylinder");
  const double lo = q.t_start(), hi = q.t1;
  check_window(traj, lo, hi);

  const double s = kernel.s, p = kernel.p, lambda = kernel.lambda;
  const double sp = s * p;
  const double expo = -(mesh.dim + sp);
  const double wexp = (p - 1.0 + xi) / p;

  const auto ball = mesh.ball(q.x0, q.r);
  const auto outside = mesh.outside_ball(q.x0, q.r);

  // sup_{x in supp psi} of the exterior kernel mass, with the beyond-mesh
  // remainder (constant-in-space bound)
  double kernel_mass = 0.0;
  std::vector<std::size_t> support;
  for (std::size_t i : ball)
    if (cutoff.psi(mesh.point(i)) > 0.0) support.push_back(i);
  for (std::size_t i : support) {
    double mass = 0.0;
    for (std::size_t j : outside)
      mass += std::pow(dist(mesh.point(i), mesh.point(j)), expo) * mesh.measure[j];
    const double rho = std::max(coverage_radius(mesh, mesh.point(i)), q.r);
    mass += sphere_measure(mesh.dim) * std::pow(rho, -sp) / sp;
    kernel_mass = std::max(kernel_mass, mass);
  }

  CaccioppoliReport rep;
  rep.xi = xi;
  rep.d = d;

  double l2_sup = 0.0;
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    const Field& f = traj.fields[k];
    const double tk = f.time;
    const double w_k = (k == 0) ? 0.0 : overlap(traj.fields[k - 1].time, tk, lo, hi);
    const bool in_window = tk >= lo - 1e-12 && tk <= hi + 1e-12;
    if (w_k <= 0.0 && !in_window) continue;

    std::vector<double> v(ball.size()), w(ball.size()), phi(ball.size());
    for (std::size_t a = 0; a < ball.size(); ++a) {
      const double vi = f.values[ball[a]] + d;
      if (!(vi > 0.0))
        throw std::invalid_argument(
            "caccioppoli_report: u + d must stay positive; pass a nonnegative trajectory");
      v[a] = vi;
      w[a] = std::pow(vi, wexp);
      phi[a] = cutoff.phi(mesh.point(ball[a]), tk);
    }

    if (in_window) {
      double m2 = 0.0;
      for (std::size_t a = 0; a < ball.size(); ++a)
        m2 += std::pow(v[a], 1.0 + xi) * std::pow(phi[a], p) * mesh.measure[ball[a]];
      l2_sup = std::max(l2_sup, m2 / (1.0 + xi));
    }
    if (w_k <= 0.0) continue;

    double l1_k = 0.0, r1_k = 0.0;
    for (std::size_t a = 0; a < ball.size(); ++a) {
      const std::size_t i = ball[a];
      for (std::size_t b = a + 1; b < ball.size(); ++b) {
        const std::size_t j = ball[b];
        const double r_ij = dist(mesh.point(i), mesh.point(j));
        const double mm = mesh.measure[i] * mesh.measure[j];
        const double canonical = std::pow(r_ij, expo) * mm;
        const double dwphi = w[a] * phi[a] - w[b] * phi[b];
        l1_k += std::pow(std::abs(dwphi), p) *
                kernel.eval(mesh.dim, mesh.point(i), mesh.point(j), tk) * mm;
        r1_k += std::pow(std::max(w[a], w[b]), p) *
                std::pow(std::abs(phi[a] - phi[b]), p) * lambda * canonical;
      }
    }
    rep.l1 += w_k * 2.0 * l1_k;  // ordered pairs
    rep.r1 += w_k * 2.0 * r1_k;

    double wp_mass = 0.0, vxi_mass = 0.0, r4_k = 0.0;
    for (std::size_t a = 0; a < ball.size(); ++a) {
      const double m = mesh.measure[ball[a]];
      const double php = std::pow(phi[a], p);
      wp_mass += std::pow(w[a], p) * php * m;
      vxi_mass += std::pow(v[a], xi) * php * m;
      r4_k += std::pow(v[a], 1.0 + xi) *
              std::max(cutoff.dphi_p_dt(mesh.point(ball[a]), tk, p), 0.0) * m;
    }
    rep.r2 += w_k * kernel_mass * wp_mass;
    rep.r4 += w_k * r4_k / (1.0 + xi);

    // tail factor of the exterior positive part at this time
    double tail_factor = 0.0;
    double band_max = 0.0;
    for (std::size_t e : mesh.exterior_nodes)
      band_max = std::max(band_max, std::max(f.values[e], 0.0));
    for (std::size_t i : support) {
      double mass = 0.0;
      for (std::size_t j : outside)
        mass += std::pow(std::max(f.values[j], 0.0), p - 1.0) *
                std::pow(dist(mesh.point(i), mesh.point(j)), expo) * mesh.measure[j];
      const double rho = std::max(coverage_radius(mesh, mesh.point(i)), q.r);
      mass += std::pow(band_max, p - 1.0) * sphere_measure(mesh.dim) *
              std::pow(rho, -sp) / sp;
      tail_factor = std::max(tail_factor, mass);
    }
    rep.r3 += w_k * tail_factor * vxi_mass;
  }
  rep.l2 = l2_sup;

  const double rhs = rep.r1 + rep.r2 + rep.r3 + rep.r4;
  const double lhs = rep.l1 + rep.l2;
  rep.c_emp = rhs > 0.0 ? lhs / rhs
                        : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return rep;
}

MoserLadder moser_ladder(int n, double s, double p, double xi0, int levels) {
  const double sp = s * p;
  if (!(sp < n)) throw std::invalid_argument("moser_ladder: requires sp < n");
  if (!(xi0 > 1.0)) throw std::invalid_argument("moser_ladder: requires xi0 > 1");
  MoserLadder l;
  l.n = n;
  l.s = s;
  l.p = p;
  l.xi0 = xi0;
  l.kappa_star = n / (n - sp);
  l.g_exponent = l.kappa_star / (l.kappa_star - 1.0);
  l.gamma = 1.0 + 1.0 / l.g_exponent;  // = (n + sp)/n
  l.kappa = 1.0 + (1.0 + xi0) / (l.g_exponent * (p - 1.0 + xi0));
  l.alpha = (n + sp) * (n + sp) / sp;
  l.alpha_final = (n + sp) * (n + sp + s * n) / sp;
  for (int j = 0; j <= levels; ++j) {
    const double xi_j = std::pow(l.gamma, j) * (xi0 + 1.0) - 1.0;
    l.xi.push_back(xi_j);
    l.pj.push_back(p - 1.0 + xi_j);
  }
  return l;
}

bool moser_ladder_identities_exact(int n, Rational s, Rational p, Rational xi0,
                                   int levels) {
  using Int = boost::multiprecision::cpp_int;
  using Rat = boost::rational<Int>;
  auto rat = [](const Rational& r) { return Rat(Int(r.num), Int(r.den)); };

  const Rat rn(n), rs = rat(s), rp = rat(p), rxi0 = rat(xi0);
  const Rat sp = rs * rp;
  if (!(sp < rn && rxi0 > Rat(1))) return false;

  const Rat kappa_star = rn / (rn - sp);
  const Rat g = kappa_star / (kappa_star - 1);
  const Rat gamma = 1 + 1 / g;
  if (gamma != (rn + sp) / rn) return false;

  Rat xi_j = rxi0;
  Rat gamma_pow = 1;
  for (int j = 0; j < levels; ++j) {
    const Rat xi_next = gamma * (xi_j + 1) - 1;
    // closed form xi_j = gamma^j (xi0 + 1) - 1 matches the recursion
    gamma_pow *= gamma;
    if (xi_next != gamma_pow * (rxi0 + 1) - 1) return false;
    // reverse Hoelder exponent bookkeeping: p - 1 + sp/n + gamma xi_j = p_{j+1}
    if (rp - 1 + sp / rn + gamma * xi_j != rp - 1 + xi_next) return false;
    // kappa stays strictly inside (1, kappa*)
    if (xi_j >= Rat(1)) {
      const Rat kappa = 1 + (1 + xi_j) / (g * (rp - 1 + xi_j));
      if (!(kappa > Rat(1) && kappa < kappa_star)) return false;
    }
    xi_j = xi_next;
  }
  return true;
}

namespace {

struct SupEval {
  double sup_value = 0.0;  // LHS: sup over sigma Q
  double tail_sigma = 0.0;
  double tail_full = 0.0;
  double avg_sup = 0.0;    // sup in time of the spatial average over B_R
};

SupEval evaluate_bound_fields(const Trajectory& sup_traj, const Trajectory& tail_traj,
                              const Trajectory& avg_traj, const Mesh& mesh,
                              const Cylinder& q, double sigma, double s, double p) {
  SupEval ev;
  const double sp = s * p;
  const auto sigma_ball = mesh.ball(q.x0, sigma * q.r);
  const double t_sigma_lo = q.t1 - std::pow(sigma, sp) * q.duration;
  for (const Field& f : sup_traj.fields) {
    if (f.time < t_sigma_lo - 1e-12 || f.time > q.t1 + 1e-12) continue;
    for (std::size_t i : sigma_ball) ev.sup_value = std::max(ev.sup_value, f.values[i]);
  }

  ev.tail_sigma = tail(tail_traj, mesh, q.x0, sigma * q.r, q.duration, q.t1,
                       TailVariant::supremum, s, p).total;
  ev.tail_full = tail(tail_traj, mesh, q.x0, q.r, q.duration, q.t1,
                      TailVariant::supremum, s, p).total;

  const auto full_ball = mesh.ball(q.x0, q.r);
  double ball_measure = 0.0;
  for (std::size_t i : full_ball) ball_measure += mesh.measure[i];
  for (const Field& f : avg_traj.fields) {
    if (f.time < q.t_start() - 1e-12 || f.time > q.t1 + 1e-12) continue;
    double m = 0.0;
    for (std::size_t i : full_ball) m += f.values[i] * mesh.measure[i];
    ev.avg_sup = std::max(ev.avg_sup, m / ball_measure);
  }
  return ev;
}

}  // namespace

BoundednessReport boundedness_check(const Trajectory& traj, const Mesh& mesh,
                                    const Cylinder& q, double sigma,
                                    BoundednessMode mode, double s, double p) {
  if (!(p > 2.0))
    throw std::invalid_argument("boundedness_check: p = 2 is excluded (1/(p-2) exponent)");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("boundedness_check: sigma must lie in (0,1)");
  const double sp = s * p;
  const Cylinder q2 = scale_cylinder(q, 2.0, s, p);
  if (!mesh.contains_ball(q.x0, q2.r))
    throw std::invalid_argument("boundedness_check: 2Q ball exceeds the meshed region");
  check_window(traj, q2.t_start(), q2.t1);

  SupEval ev;
  if (mode == BoundednessMode::nonneg_subsolution) {
    const Trajectory up = transform_trajectory(traj, FieldTransform::positive_part);
    ev = evaluate_bound_fields(traj, up, traj, mesh, q, sigma, s, p);
  } else {
    // max of the two nonnegative-mode checks on u_+ and u_-, both against the
    // |u| tail and |u| average
    Trajectory abs_traj = traj;
    for (Field& f : abs_traj.fields)
      for (double& v : f.values) v = std::abs(v);
    const Trajectory up = transform_trajectory(traj, FieldTransform::positive_part);
    const Trajectory un = transform_trajectory(traj, FieldTransform::negative_part);
    SupEval pos = evaluate_bound_fields(up, abs_traj, abs_traj, mesh, q, sigma, s, p);
    SupEval neg = evaluate_bound_fields(un, abs_traj, abs_traj, mesh, q, sigma, s, p);
    ev = pos.sup_value >= neg.sup_value ? pos : neg;
  }

  BoundednessReport rep;
  rep.q = q;
  rep.sigma = sigma;
  rep.mode = mode;
  rep.lhs = ev.sup_value;
  rep.term_scale = std::pow(std::pow(q.r, sp) / q.duration, 1.0 / (p - 2.0));
  rep.term_tail = q.duration / std::pow(q.r, sp) * std::pow(ev.tail_sigma, p - 1.0);
  rep.term_avg = q.duration / std::pow(q.r, sp) * std::pow(std::max(ev.avg_sup, 0.0), p - 1.0);
  const double alpha_final = (mesh.dim + sp) * (mesh.dim + sp + s * mesh.dim) / sp;
  rep.prefactor = std::pow(1.0 - sigma, -alpha_final);
  rep.rhs = rep.prefactor * (rep.term_scale + rep.term_tail + rep.term_avg);
  rep.c_emp = rep.lhs / rep.rhs;
  rep.tail_sigma_r = ev.tail_sigma;
  rep.tail_full_r = ev.tail_full;
  return rep;
}

namespace {

// smallest c making b^p <= a^p (1 + c e) + (1 + c e) e^{1-p} |a-b|^p at one point
double required_cutoff_constant(double a, double b, double eps, double p) {
  const double dpow = std::pow(std::abs(a - b), p);
  const double ap = std::pow(a, p);
  const double rhs0 = ap + std::pow(eps, 1.0 - p) * dpow;
  const double num = std::pow(b, p) - rhs0;
  if (num <= 0.0) return 0.0;
  const double den = eps * ap + std::pow(eps, 2.0 - p) * dpow;
  return num / den;
}

}  // namespace

InequalityReport inequality_suite(std::uint64_t seed, std::size_t trials) {
  if (trials < 1) throw std::invalid_argument("inequality_suite: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  InequalityReport rep;
  rep.trials = trials;
  const double tol = 1e-12;

  for (std::size_t k = 0; k < trials; ++k) {
    // 0 <= a < b: a^{p-1} - b^{p-1} <= -(b-a)^{p-1}
    const double p = 2.0 + 4.0 * uni(rng);
    double a = 10.0 * uni(rng), b = 10.0 * uni(rng);
    if (a > b) std::swap(a, b);
    if (a == b) b += 0.5;
    const double lhs = std::pow(a, p - 1.0) - std::pow(b, p - 1.0);
    const double rhs = -std::pow(b - a, p - 1.0);
    const double margin = lhs - rhs;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (margin > tol * scale) {
      ++rep.violations_power_diff;
      rep.max_margin_power_diff = std::max(rep.max_margin_power_diff, margin / scale);
    }

    // alpha^s + beta^s <= (alpha + beta)^s for s >= 1
    const double sexp = 1.0 + 4.0 * uni(rng);
    const double alpha = 10.0 * uni(rng) + 1e-12;
    const double beta = 10.0 * uni(rng) + 1e-12;
    const double lhs2 = std::pow(alpha, sexp) + std::pow(beta, sexp);
    const double rhs2 = std::pow(alpha + beta, sexp);
    const double margin2 = lhs2 - rhs2;
    const double scale2 = std::max(1.0, rhs2);
    if (margin2 > tol * scale2) {
      ++rep.violations_superadditive;
      rep.max_margin_superadditive =
          std::max(rep.max_margin_superadditive, margin2 / scale2);
    }
  }

  // cutoff inequality: recover c_p over a dense grid plus seeded random
  // triples (phi(x), phi(y), eps); the recorded value is the empirical sup
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    double c = 0.0;
    for (int ie = 1; ie <= 99; ++ie) {
      const double eps = ie / 100.0;
      for (int ia = 0; ia <= 100; ++ia) {
        const double a = ia / 100.0;
        for (int ib = 0; ib <= 100; ++ib)
          c = std::max(c, required_cutoff_constant(a, ib / 100.0, eps, p));
      }
    }
    std::mt19937_64 rng2(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k = 0; k < trials; ++k) {
      const double a = uni(rng2), b = uni(rng2);
      const double eps = std::min(0.999, std::max(1e-6, uni(rng2)));
      c = std::max(c, required_cutoff_constant(a, b, eps, p));
      (void)rng2;
    }
    // confirm: zero violations at the recorded constant
    std::mt19937_64 rng3(seed ^ 0x2545f4914f6cdd1dULL);
    for (std::size_t k = 0; k < trials; ++k) {
      const double a = uni(rng3), b = uni(rng3);
      const double eps = std::min(0.999, std::max(1e-6, uni(rng3)));
      if (required_cutoff_constant(a, b, eps, p) > c + tol) ++rep.violations_cutoff;
    }
    rep.cutoff_constants.push_back({p, c, 1.0 / (4.0 * c)});
  }

  rep.pass = rep.violations_power_diff == 0 && rep.violations_superadditive == 0 &&
             rep.violations_cutoff == 0;
  return rep;
}

TailAuditReport tail_finiteness_audit(const Trajectory& traj,
                                      const ProblemSpec& spec, double q) {
  const Mesh& mesh = spec.mesh;
  const double p = spec.kernel.p;
  if (q <= 0.0) q = p;
  const double expo = mesh.dim + spec.kernel.s * p;

  auto g_mass_on = [&](const Mesh& m) {
    double sup = 0.0;
    for (const Field& f : traj.fields) {
      double acc = 0.0;
      for (std::size_t e : m.exterior_nodes) {
        const double g = spec.exterior_data(m.point(e), f.time);
        acc += std::pow(std::abs(g), p - 1.0) /
               (1.0 + std::pow(dist(m.point(e), m.center), expo)) * m.measure[e];
      }
      sup = std::max(sup, acc);
    }
    return sup;
  };

  TailAuditReport rep;
  rep.q = q;
  rep.g_weighted_mass = g_mass_on(mesh);
  const Mesh doubled = build_mesh(mesh.dim, mesh.lo, mesh.hi, mesh.h, 2.0 * mesh.r_ext);
  rep.g_weighted_mass_2r = g_mass_on(doubled);
  const double denom = std::max(rep.g_weighted_mass, 1e-300);
  rep.rel_change = (rep.g_weighted_mass_2r - rep.g_weighted_mass) / denom;
  rep.flagged = rep.g_weighted_mass > 0.0 && rep.rel_change >= 0.05;

  for (const Field& f : traj.fields) {
    double acc = 0.0;
    for (std::size_t i : mesh.interior_nodes)
      acc += std::pow(std::abs(f.values[i]), q) * mesh.measure[i];
    rep.interior_lq_mass = std::max(rep.interior_lq_mass, acc);
  }

  double rmin = std::numeric_limits<double>::infinity();
  for (int d = 0; d < mesh.dim; ++d) rmin = std::min(rmin, 0.5 * (mesh.hi[d] - mesh.lo[d]));
  const auto half_ball = mesh.ball(mesh.center, 0.25 * rmin);  // B_{r/2}, r = rmin/2
  for (const Field& f : traj.fields) {
    double acc = 0.0;
    for (std::size_t i : half_ball)
      acc += std::pow(std::abs(f.values[i]), p) * mesh.measure[i];
    rep.local_sup_mass = std::max(rep.local_sup_mass, acc);
  }
  return rep;
}

}  // namespace fplab

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "fplab/estimates.hpp"

using namespace fplab;

namespace {

Trajectory constant_trajectory(const Mesh& mesh, double c, double t0, double t1,
                               int snapshots) {
  Trajectory traj;
  for (int k = 0; k < snapshots; ++k) {
    Field f = constant_field(mesh, c);
    f.time = t0 + (t1 - t0) * k / std::max(1, snapshots - 1);
    traj.fields.push_back(f);
    if (k > 0) traj.diags.push_back({});
  }
  return traj;
}

}  // namespace

TEST_CASE("tail: trivial cases") {
  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.05, 4.0);

  SUBCASE("zero trajectory has zero tail and zero remainder") {
    const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 1.0, 3);
    const TailEstimate e =
        tail(traj, mesh, mesh.center, 0.3, 1.0, 1.0, TailVariant::average, 0.5, 2.0);
    CHECK(e.value == 0.0);
    CHECK(e.remainder == 0.0);
    CHECK(e.total == 0.0);
  }
  SUBCASE("a field supported inside the ball has zero tail") {
    Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 1.0, 2);
    for (Field& f : traj.fields)
      for (std::size_t i = 0; i < mesh.n_nodes(); ++i)
        if (dist(mesh.point(i), mesh.center) < 0.25) f.values[i] = 3.0;
    const TailEstimate e =
        tail(traj, mesh, mesh.center, 0.3, 1.0, 1.0, TailVariant::average, 0.5, 2.0);
    CHECK(e.value == 0.0);
  }
  SUBCASE("preconditions") {
    const Trajectory traj = constant_trajectory(mesh, 1.0, 0.0, 1.0, 2);
    CHECK_THROWS_AS(tail(traj, mesh, mesh.center, 10.0, 1.0, 1.0, TailVariant::average,
                         0.5, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(tail(traj, mesh, mesh.center, 0.3, 0.0, 1.0, TailVariant::average,
                         0.5, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(tail(traj, mesh, mesh.center, 0.3, 1.0, 9.0, TailVariant::average,
                         0.5, 2.0),
                    std::invalid_argument);
  }
}

TEST_CASE("tail: closed-form oracle for v = 1 off the ball (n=1, s=0.5, p=2)") {
  // analytic integral: int_{|y|>r} |y|^{-(1+sp)} dy = 2 r^{-sp}/(sp), so
  // tail^{p-1} = r^{sp} * 2 r^{-sp}/(sp) = 2/(sp) = 2 and tail = 2
  const double r = 0.04, s = 0.5, p = 2.0;
  const double analytic = std::pow(2.0 / (s * p), 1.0 / (p - 1.0));
  CHECK(analytic == 2.0);

  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.005, 160.0 * r);
  const Trajectory traj = constant_trajectory(mesh, 1.0, 0.0, 1.0, 2);
  const TailEstimate e =
      tail(traj, mesh, mesh.center, r, 1.0, 1.0, TailVariant::average, s, p);
  CHECK(std::abs(e.value - analytic) / analytic <= 0.02);
  CHECK(std::abs(e.total - analytic) / analytic <= 0.02);
  CHECK(e.total >= e.value);

  // remainder certificate decreases monotonically in the truncation radius
  double prev = 1e300;
  for (double rext : {3.2, 6.4, 12.8}) {
    const Mesh m = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.01, rext);
    const Trajectory t = constant_trajectory(m, 1.0, 0.0, 1.0, 2);
    const TailEstimate e2 = tail(t, m, m.center, r, 1.0, 1.0, TailVariant::average, s, p);
    CHECK(e2.remainder < prev);
    prev = e2.remainder;
  }
}

TEST_CASE("tail: homogeneity and the sup/average ordering") {
  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.05, 4.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Trajectory traj;
  for (int k = 0; k <= 3; ++k) {
    Field f{std::vector<double>(mesh.n_nodes()), 0.1 * k};
    for (double& v : f.values) v = uni(rng);
    traj.fields.push_back(f);
  }
  for (double p : {2.0, 3.0}) {
    const TailEstimate avg =
        tail(traj, mesh, mesh.center, 0.4, 0.3, 0.3, TailVariant::average, 0.5, p);
    const TailEstimate sup =
        tail(traj, mesh, mesh.center, 0.4, 0.3, 0.3, TailVariant::supremum, 0.5, p);
    CHECK(sup.value >= avg.value - 1e-12);

    Trajectory scaled = traj;
    for (Field& f : scaled.fields)
      for (double& v : f.values) v *= 3.5;
    const TailEstimate avg_scaled =
        tail(scaled, mesh, mesh.center, 0.4, 0.3, 0.3, TailVariant::average, 0.5, p);
    CHECK(std::abs(avg_scaled.value - 3.5 * avg.value) <= 1e-12 * avg_scaled.value);
    CHECK(std::abs(avg_scaled.total - 3.5 * avg.total) <= 1e-12 * avg_scaled.total);
  }
}

TEST_CASE("offset d") {
  const Mesh mesh = build_mesh(1, {-2.0, 0}, {2.0, 0}, 0.1, 8.0);

  SUBCASE("zero field, r^{sp} = T0: d = 1") {
    const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 2.0, 3);
    const Cylinder q{mesh.center, 1.0, 2.0, 1.0};  // r^{sp} = 1 = T0
    CHECK(offset_d(traj, mesh, q, 0.5, 0.5, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("zero field, r=1, s=0.5, p=4, T0=2: d = (1/2)^{1/2}") {
    const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 2.0, 3);
    const Cylinder q{mesh.center, 1.0, 2.0, 2.0};
    CHECK(offset_d(traj, mesh, q, 0.5, 0.5, 4.0) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
  SUBCASE("p = 2 is rejected") {
    const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 2.0, 3);
    const Cylinder q{mesh.center, 1.0, 2.0, 1.0};
    CHECK_THROWS_AS(offset_d(traj, mesh, q, 0.5, 0.5, 2.0), std::invalid_argument);
  }
}

TEST_CASE("caccioppoli report on the constant-field degenerate case") {
  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.05, 4.0);
  const KernelSpec kernel = make_kernel(0.5, 3.0, 1.0);
  const Cylinder q{mesh.center, 0.5, 0.4, 0.3};
  const CutoffSpec cutoff = build_cutoff(0.25, 0.45, q.t1 - 0.25, q.t1 - 0.15, q.x0);
  const double d = 0.7, xi = 1.5;
  const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 0.4, 9);

  const CaccioppoliReport rep = caccioppoli_report(traj, mesh, kernel, q, cutoff, xi, d);

  // closed forms: with u = 0, v = d and w = d^{(p-1+xi)/p} are constants, so
  // every term is an explicit power of d times a cutoff sum
  const double p = kernel.p;
  const double wconst = std::pow(d, (p - 1.0 + xi) / p);
  const auto ball = mesh.ball(q.x0, q.r);
  double phi_pair = 0.0;  // ordered sum of |phi(x)-phi(y)|^p against the kernel
  double time_integral = 0.0;
  {
    // snapshots are uniform on [0, 0.4]; interior spacing 0.05
    for (std::size_t k = 1; k < traj.fields.size(); ++k) {
      const double tk = traj.fields[k].time;
      const double w_k = traj.fields[k].time - traj.fields[k - 1].time;
      double pair_k = 0.0;
      for (std::size_t a = 0; a < ball.size(); ++a)
        for (std::size_t b = 0; b < ball.size(); ++b) {
          if (a == b) continue;
          const double dphi = cutoff.phi(mesh.point(ball[a]), tk) -
                              cutoff.phi(mesh.point(ball[b]), tk);
          pair_k += std::pow(std::abs(dphi), p) *
                    kernel.eval(1, mesh.point(ball[a]), mesh.point(ball[b]), tk) *
                    mesh.measure[ball[a]] * mesh.measure[ball[b]];
        }
      phi_pair += w_k * pair_k;
      time_integral += w_k;
    }
  }
  CHECK(rep.l1 == doctest::Approx(std::pow(wconst, p) * phi_pair).epsilon(1e-12));
  CHECK(rep.r1 == doctest::Approx(std::pow(wconst, p) * phi_pair).epsilon(1e-12));

  double sup_phi_mass = 0.0;
  for (const Field& f : traj.fields) {
    double m = 0.0;
    for (std::size_t i : ball)
      m += std::pow(cutoff.phi(mesh.point(i), f.time), p) * mesh.measure[i];
    sup_phi_mass = std::max(sup_phi_mass, m);
  }
  CHECK(rep.l2 == doctest::Approx(std::pow(d, 1.0 + xi) * sup_phi_mass / (1.0 + xi))
                      .epsilon(1e-12));
  CHECK(rep.r2 > 0.0);
  CHECK(rep.r3 == 0.0);  // exterior positive part vanishes
  CHECK(rep.r4 > 0.0);   // the time ramp contributes
  CHECK(std::isfinite(rep.c_emp));
  CHECK(rep.l1 + rep.l2 <= rep.c_emp * (rep.r1 + rep.r2 + rep.r3 + rep.r4) + 1e-12);
  (void)time_integral;
}

TEST_CASE("caccioppoli preconditions") {
  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.1, 4.0);
  const KernelSpec kernel = make_kernel(0.5, 3.0, 1.0);
  const Cylinder q{mesh.center, 0.5, 0.4, 0.3};
  const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 0.4, 5);
  const CutoffSpec ok = build_cutoff(0.25, 0.45, q.t1 - 0.25, q.t1 - 0.15, q.x0);
  CHECK_THROWS_AS(caccioppoli_report(traj, mesh, kernel, q, ok, 0.5, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(caccioppoli_report(traj, mesh, kernel, q, ok, 1.0, 0.0),
                  std::invalid_argument);
  const CutoffSpec too_wide = build_cutoff(0.3, 0.6, q.t1 - 0.25, q.t1 - 0.15, q.x0);
  CHECK_THROWS_AS(caccioppoli_report(traj, mesh, kernel, q, too_wide, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("caccioppoli: widening the plateau grows the gradient-side terms") {
  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.02, 4.0);
  const KernelSpec kernel = make_kernel(0.5, 3.0, 1.0);
  const Cylinder q{mesh.center, 0.5, 0.4, 0.3};
  const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 0.4, 9);
  double prev = 0.0;
  for (double r_in : {0.15, 0.3, 0.42}) {
    const CutoffSpec cutoff = build_cutoff(r_in, 0.45, q.t1 - 0.25, q.t1 - 0.15, q.x0);
    const CaccioppoliReport rep = caccioppoli_report(traj, mesh, kernel, q, cutoff, 1.0, 0.5);
    CHECK(rep.r1 + rep.r4 > prev);
    prev = rep.r1 + rep.r4;
  }
}

TEST_CASE("moser ladder spot values and recursions") {
  SUBCASE("n=2, s=0.5, p=2: kappa*=2, G=2, gamma=3/2, alpha=9") {
    const MoserLadder l = moser_ladder(2, 0.5, 2.0, 2.0);
    CHECK(l.kappa_star == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l.g_exponent == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l.gamma == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(l.alpha == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(l.alpha_final == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(l.kappa > 1.0);
    CHECK(l.kappa < l.kappa_star);
    // xi_j = 3 (3/2)^j - 1
    CHECK(l.xi[1] == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(l.xi[2] == doctest::Approx(5.75).epsilon(1e-15));
  }
  SUBCASE("recursions hold in floating point too") {
    const MoserLadder l = moser_ladder(2, 0.4, 3.0, 1.5, 6);
    for (std::size_t j = 0; j + 1 < l.xi.size(); ++j) {
      CHECK(l.xi[j + 1] == doctest::Approx(l.gamma * (l.xi[j] + 1.0) - 1.0).epsilon(1e-12));
      CHECK(l.pj[j + 1] ==
            doctest::Approx(l.p - 1.0 + l.s * l.p / l.n + l.gamma * l.xi[j]).epsilon(1e-12));
    }
  }
  SUBCASE("sp >= n and xi0 <= 1 are rejected") {
    CHECK_THROWS_AS(moser_ladder(1, 0.5, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(moser_ladder(2, 0.5, 2.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("moser ladder identities in exact rational arithmetic") {
  CHECK(moser_ladder_identities_exact(2, {1, 2}, {2, 1}, {2, 1}));
  CHECK(moser_ladder_identities_exact(2, {1, 3}, {5, 2}, {7, 5}));
  CHECK(moser_ladder_identities_exact(1, {1, 4}, {3, 1}, {3, 2}));
  CHECK_FALSE(moser_ladder_identities_exact(1, {1, 2}, {2, 1}, {2, 1}));  // sp = n

  std::mt19937_64 rng(2027);
  std::uniform_int_distribution<long long> den(2, 12), num(1, 11);
  int checked = 0;
  while (checked < 20) {
    const int n = (checked % 2) + 1;
    const long long sd = den(rng);
    const Rational s{std::min(num(rng), sd - 1), sd};
    const Rational p{2 * den(rng) + num(rng), den(rng)};
    const Rational xi0{den(rng) + num(rng) + 1, den(rng)};
    const double sv = double(s.num) / s.den, pv = double(p.num) / p.den;
    if (!(sv * pv < n) || !(pv >= 2.0) || !(double(xi0.num) / xi0.den > 1.0)) continue;
    CHECK(moser_ladder_identities_exact(n, s, p, xi0));
    ++checked;
  }
}

TEST_CASE("boundedness checker") {
  const Mesh mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.05, 4.0);
  const double s = 0.5, p = 3.0;
  const Cylinder q{mesh.center, 0.5, 0.4, 0.08};  // 2Q fits: 2^{sp} T0 = 0.226 < 0.4

  SUBCASE("zero trajectory: zero LHS, positive RHS, zero C_emp") {
    const Trajectory traj = constant_trajectory(mesh, 0.0, 0.0, 0.4, 9);
    const BoundednessReport rep =
        boundedness_check(traj, mesh, q, 0.5, BoundednessMode::nonneg_subsolution, s, p);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs > 0.0);
    CHECK(rep.c_emp == 0.0);
  }

  SUBCASE("constant solution: closed-form terms") {
    const double c = 0.8;
    const Trajectory traj = constant_trajectory(mesh, c, 0.0, 0.4, 9);
    const BoundednessReport rep =
        boundedness_check(traj, mesh, q, 0.5, BoundednessMode::nonneg_subsolution, s, p);
    CHECK(rep.lhs == doctest::Approx(c).epsilon(1e-14));
    CHECK(rep.term_avg == doctest::Approx(q.duration / std::pow(q.r, s * p) *
                                          std::pow(c, p - 1.0))
                              .epsilon(1e-12));
    CHECK(rep.term_scale ==
          doctest::Approx(std::pow(std::pow(q.r, s * p) / q.duration, 1.0 / (p - 2.0)))
              .epsilon(1e-14));
    CHECK(rep.lhs <= rep.c_emp * rep.rhs * (1.0 + 1e-12));
    CHECK(std::isfinite(rep.c_emp));
    // both radius conventions are reported; for a constant field the r^{sp}
    // prefactor makes the covered part radius-independent
    CHECK(rep.tail_sigma_r > 0.0);
    CHECK(rep.tail_full_r > 0.0);
  }

  SUBCASE("unsigned mode equals the composition over positive and negative parts") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Trajectory traj;
    for (int k = 0; k <= 8; ++k) {
      Field f{std::vector<double>(mesh.n_nodes()), 0.05 * k};
      for (double& v : f.values) v = uni(rng);
      traj.fields.push_back(f);
    }
    const BoundednessReport uns =
        boundedness_check(traj, mesh, q, 0.5, BoundednessMode::unsigned_solution, s, p);
    Trajectory abs_traj = traj;
    for (Field& f : abs_traj.fields)
      for (double& v : f.values) v = std::abs(v);
    const BoundednessReport pos = boundedness_check(
        transform_trajectory(abs_traj, FieldTransform::identity), mesh, q, 0.5,
        BoundednessMode::nonneg_subsolution, s, p);
    // sup |u| equals the max of sup u_+ and sup u_-; with the shared |u| tail
    // and average the reports agree exactly
    CHECK(uns.lhs == pos.lhs);
    CHECK(uns.term_avg == pos.term_avg);
    CHECK(uns.c_emp == pos.c_emp);
  }

  SUBCASE("preconditions") {
    const Trajectory traj = constant_trajectory(mesh, 1.0, 0.0, 0.4, 5);
    CHECK_THROWS_AS(boundedness_check(traj, mesh, q, 0.5,
                                      BoundednessMode::nonneg_subsolution, 0.5, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(boundedness_check(traj, mesh, q, 1.5,
                                      BoundednessMode::nonneg_subsolution, 0.5, 3.0),
                    std::invalid_argument);
    const Cylinder too_big{mesh.center, 3.0, 0.4, 0.05};
    CHECK_THROWS_AS(boundedness_check(traj, mesh, too_big, 0.5,
                                      BoundednessMode::nonneg_subsolution, 0.5, 3.0),
                    std::invalid_argument);
  }
}

TEST_CASE("elementary inequality suite") {
  const InequalityReport rep = inequality_suite(99, 20000);
  CHECK(rep.pass);
  CHECK(rep.violations_power_diff == 0);
  CHECK(rep.violations_superadditive == 0);
  CHECK(rep.violations_cutoff == 0);

  // spot values: a=0,b=1,p=3 gives equality -1 = -1; a=1,b=2,p=3 gives -3 <= -1
  CHECK(std::pow(0.0, 2.0) * 0.0 - 1.0 == -1.0);
  CHECK(1.0 - 4.0 <= -1.0);
  // alpha=beta=1, s=2: 2 <= 4
  CHECK(2.0 <= std::pow(2.0, 2.0));

  REQUIRE(rep.cutoff_constants.size() == 4);
  for (std::size_t i = 1; i < rep.cutoff_constants.size(); ++i)
    CHECK(rep.cutoff_constants[i].c_p >= rep.cutoff_constants[i - 1].c_p - 1e-12);
  for (const DkpConstant& c : rep.cutoff_constants) {
    CHECK(c.c_p > 0.0);
    CHECK(c.delta == doctest::Approx(1.0 / (4.0 * c.c_p)));
  }
  CHECK_THROWS_AS(inequality_suite(1, 0), std::invalid_argument);
}

TEST_CASE("tail finiteness audit") {
  ProblemSpec spec;
  spec.mesh = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.05, 4.0);
  spec.kernel = make_kernel(0.5, 3.0, 1.0);
  spec.horizon = 0.2;
  spec.dt = 0.1;

  SUBCASE("zero data reports zeros") {
    spec.exterior_data = [](const Point&, double) { return 0.0; };
    spec.initial_data = [](const Point&) { return 0.0; };
    Trajectory traj = constant_trajectory(spec.mesh, 0.0, 0.0, 0.2, 3);
    const TailAuditReport rep = tail_finiteness_audit(traj, spec);
    CHECK(rep.g_weighted_mass == 0.0);
    CHECK(rep.interior_lq_mass == 0.0);
    CHECK(rep.local_sup_mass == 0.0);
    CHECK_FALSE(rep.flagged);
  }
  SUBCASE("bounded g stabilizes under doubling the truncation radius") {
    spec.exterior_data = [](const Point& x, double) { return 1.0 / (1.0 + x[0] * x[0]); };
    spec.initial_data = [](const Point&) { return 0.0; };
    Trajectory traj = constant_trajectory(spec.mesh, 0.0, 0.0, 0.2, 3);
    const TailAuditReport rep = tail_finiteness_audit(traj, spec);
    CHECK(rep.rel_change < 0.05);
    CHECK_FALSE(rep.flagged);
  }
  SUBCASE("critically growing g is flagged") {
    // g ~ |x|^{sp/(p-1)} makes |g|^{p-1}/(1+|x|^{n+sp}) ~ |x|^{-n}: log divergence
    const double expo = spec.kernel.s * spec.kernel.p / (spec.kernel.p - 1.0);
    spec.exterior_data = [expo](const Point& x, double) {
      return std::pow(std::abs(x[0]), expo);
    };
    spec.initial_data = [](const Point&) { return 0.0; };
    Trajectory traj = constant_trajectory(spec.mesh, 0.0, 0.0, 0.2, 3);
    const TailAuditReport rep = tail_finiteness_audit(traj, spec);
    CHECK(rep.flagged);
  }
}

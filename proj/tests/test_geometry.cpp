#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "fplab/geometry.hpp"

using namespace fplab;

TEST_CASE("1-D mesh matches the cell-centered hand construction") {
  const Mesh m = build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.5, 2.0);
  CHECK(m.n_nodes() == 8);
  CHECK(m.interior_nodes.size() == 4);

  std::set<double> interior;
  for (std::size_t i : m.interior_nodes) interior.insert(m.point(i)[0]);
  CHECK(interior == std::set<double>{-0.75, -0.25, 0.25, 0.75});

  // the band covers (-2,-1) and (1,2)
  for (std::size_t e : m.exterior_nodes) {
    const double x = m.point(e)[0];
    CHECK(std::abs(x) > 1.0);
    CHECK(std::abs(x) < 2.0);
  }
}

TEST_CASE("mesh invariants: exclusive masks, positive measures summing to the volume") {
  const Mesh m = build_mesh(2, {-1.0, -1.0}, {1.0, 1.0}, 0.25, 2.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    CHECK(m.measure[i] > 0.0);
    total += m.measure[i];
  }
  CHECK(total == doctest::Approx(m.volume()).epsilon(1e-12));
  CHECK(m.interior_nodes.size() + m.exterior_nodes.size() == m.n_nodes());

  // band surrounds the domain: every interior node keeps a band of width
  // >= r_ext - domain_radius between itself and the outer boundary
  const double margin = m.r_ext - m.domain_radius();
  for (std::size_t i : m.interior_nodes) {
    const Point& x = m.point(i);
    for (int d = 0; d < m.dim; ++d) {
      CHECK(x[d] - m.outer_lo[d] >= margin - 1e-12);
      CHECK(m.outer_hi[d] - x[d] >= margin - 1e-12);
    }
  }
}

TEST_CASE("2-D interior node count from an independent enumeration") {
  const Mesh m = build_mesh(2, {-1.0, -1.0}, {1.0, 1.0}, 0.25, 2.0);
  // independent count: cell centers -2 + (k+0.5)h strictly inside (-1,1)^2
  std::size_t count = 0;
  const int cells = 16;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const double x = -2.0 + (i + 0.5) * 0.25;
      const double y = -2.0 + (j + 0.5) * 0.25;
      if (x > -1 && x < 1 && y > -1 && y < 1) ++count;
    }
  }
  CHECK(count == 64);
  CHECK(m.interior_nodes.size() == 64);
}

TEST_CASE("mesh preconditions") {
  CHECK_THROWS_AS(build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(1, {-1.0, 0}, {1.0, 0}, -0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(1, {-1.0, 0}, {1.0, 0}, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(3, {-1.0, 0}, {1.0, 0}, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("mesh refinement h -> h/2 multiplies the interior count by 2^n") {
  for (int n : {1, 2}) {
    const Point lo{-1.0, -1.0}, hi{1.0, 1.0};
    const Mesh coarse = build_mesh(n, lo, hi, 0.25, 2.0);
    const Mesh fine = build_mesh(n, lo, hi, 0.125, 2.0);
    CHECK(fine.interior_nodes.size() ==
          (n == 1 ? 2 : 4) * coarse.interior_nodes.size());
  }
}

TEST_CASE("cylinder scaling") {
  const Cylinder q{{0.0, 0.0}, 1.0, 0.0, 1.0};

  SUBCASE("identity") {
    const Cylinder r = scale_cylinder(q, 1.0, 0.5, 2.0);
    CHECK(r.r == 1.0);
    CHECK(r.duration == 1.0);
    CHECK(r.t1 == 0.0);
  }
  SUBCASE("lambda=2, s=0.5, p=2 doubles radius and duration") {
    const Cylinder r = scale_cylinder(q, 2.0, 0.5, 2.0);
    CHECK(r.r == 2.0);
    CHECK(r.duration == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.t1 == 0.0);
  }
  SUBCASE("lambda=0.5, s=0.5, p=4 quarters the duration") {
    const Cylinder r = scale_cylinder(q, 0.5, 0.5, 4.0);
    CHECK(r.duration == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("composition equals the product scaling") {
    const Cylinder ab = scale_cylinder(scale_cylinder(q, 1.7, 0.6, 3.0), 0.4, 0.6, 3.0);
    const Cylinder prod = scale_cylinder(q, 1.7 * 0.4, 0.6, 3.0);
    CHECK(ab.r == prod.r);
    CHECK(ab.duration == doctest::Approx(prod.duration).epsilon(1e-12));
  }
  SUBCASE("nonpositive lambda") {
    CHECK_THROWS_AS(scale_cylinder(q, 0.0, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_cylinder(q, -1.0, 0.5, 2.0), std::invalid_argument);
  }
}

TEST_CASE("cutoff plateau, support and gradient bound") {
  const CutoffSpec c = build_cutoff(0.5, 1.0, 0.0, 0.25, {0.0, 0.0});

  CHECK(c.phi({0.0, 0.0}, 0.5) == 1.0);
  CHECK(c.phi({0.3, 0.0}, 1.0) == 1.0);
  CHECK(c.phi({1.0, 0.0}, 1.0) == 0.0);
  CHECK(c.phi({2.5, 0.0}, 1.0) == 0.0);
  CHECK(c.phi({0.0, 0.0}, -1.0) == 0.0);  // before the ramp

  // measured slope over a fine grid stays within the shape bound
  double max_slope = 0.0, max_phi = 0.0, min_phi = 1.0;
  for (int k = 0; k <= 4000; ++k) {
    const double x = -1.2 + 2.4 * k / 4000.0;
    const double f0 = c.psi({x, 0.0});
    const double f1 = c.psi({x + 1e-6, 0.0});
    max_slope = std::max(max_slope, std::abs(f1 - f0) / 1e-6);
    max_phi = std::max(max_phi, f0);
    min_phi = std::min(min_phi, f0);
  }
  CHECK(max_slope <= CutoffSpec::shape_constant / (1.0 - 0.5) + 1e-6);
  CHECK(max_phi <= 1.0);
  CHECK(min_phi >= 0.0);

  // analytic derivative agrees with the bound too
  for (int k = 0; k <= 100; ++k) {
    const double x = -1.2 + 2.4 * k / 100.0;
    CHECK(c.dpsi({x, 0.0}) <= CutoffSpec::shape_constant / 0.5 + 1e-12);
  }
  for (int k = 0; k <= 100; ++k) {
    const double t = -0.5 + 1.5 * k / 100.0;
    CHECK(std::abs(c.dzeta(t)) <= CutoffSpec::shape_constant / 0.25 + 1e-12);
  }
}

TEST_CASE("cutoff monotonicity: widening the ramp never steepens it") {
  double prev = 1e300;
  for (double r_out : {0.7, 0.9, 1.3}) {
    const CutoffSpec c = build_cutoff(0.5, r_out, 0.0, 1.0, {0.0, 0.0});
    double max_slope = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double x = 1.4 * k / 2000.0;
      max_slope = std::max(max_slope, c.dpsi({x, 0.0}));
    }
    CHECK(max_slope <= prev + 1e-12);
    prev = max_slope;
  }
}

TEST_CASE("cutoff preconditions") {
  CHECK_THROWS_AS(build_cutoff(1.0, 0.5, 0.0, 1.0, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_cutoff(0.0, 0.5, 0.0, 1.0, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_cutoff(0.2, 0.5, 1.0, 0.0, {0.0, 0.0}), std::invalid_argument);
}

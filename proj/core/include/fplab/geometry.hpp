#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fplab {

using Point = std::array<double, 2>;  // second component unused for 1-D

double dist(const Point& a, const Point& b);

/// Uniform cell-centered grid covering the box [center - R_ext, center + R_ext]^n.
/// Nodes inside the domain box are interior, the rest form the exterior band
/// that stands in for R^n \ Omega out to the truncation radius.
struct Mesh {
  int dim = 1;                   // n, 1 or 2
  double h = 0.0;                // uniform spacing
  Point lo{0, 0}, hi{0, 0};      // domain box extents per axis
  double r_ext = 0.0;            // requested truncation radius
  Point center{0, 0};
  Point outer_lo{0, 0}, outer_hi{0, 0};  // actual meshed box (grid-aligned)
  std::array<int, 2> cells{0, 0};        // node count per axis

  std::vector<Point> coords;
  std::vector<double> measure;        // cell measure h^n per node
  std::vector<std::uint8_t> interior; // 1 interior, 0 exterior
  std::vector<std::size_t> interior_nodes;
  std::vector<std::size_t> exterior_nodes;

  std::size_t n_nodes() const { return coords.size(); }
  const Point& point(std::size_t i) const { return coords[i]; }
  double volume() const;  // measure of the meshed box

  /// Half-width of Omega in the max-norm, measured from the box center.
  double domain_radius() const;
  /// Largest half-width of the actual meshed box.
  double outer_radius() const;

  /// Nodes with |x - x0| < r.
  std::vector<std::size_t> ball(const Point& x0, double r) const;
  /// Nodes with |x - x0| >= r (discrete complement of the ball).
  std::vector<std::size_t> outside_ball(const Point& x0, double r) const;
  std::vector<std::size_t> all_nodes() const;

  /// True if B_r(x0) fits inside the meshed box.
  bool contains_ball(const Point& x0, double r) const;
};

/// Build the mesh for a domain box with an exterior band out to radius r_ext
/// (measured from the box center). Throws std::invalid_argument on h <= 0,
/// degenerate extents, or r_ext too small to fit a band around the domain.
Mesh build_mesh(int dim, const Point& lo, const Point& hi, double h, double r_ext);

/// Parabolic cylinder B_r(x0) x (t1 - T1, t1).
struct Cylinder {
  Point x0{0, 0};
  double r = 0.0;        // radius
  double t1 = 0.0;       // terminal time
  double duration = 0.0; // T1

  double t_start() const { return t1 - duration; }
};

/// Intrinsic rescaling: radius scales by lambda, duration by lambda^{s p},
/// terminal time fixed.
Cylinder scale_cylinder(const Cylinder& q, double lambda, double s, double p);

/// Product cutoff phi(x,t) = psi(x) zeta(t). psi is a C^1 piecewise-cubic
/// radial bump, 1 on B_{r_in}(x0) and 0 outside B_{r_out}(x0); zeta ramps
/// from 0 before t_out to 1 after t_in. Gradients obey
/// |grad psi| <= shape_constant / (r_out - r_in) and
/// |d zeta/dt| <= shape_constant / (t_in - t_out).
struct CutoffSpec {
  Point x0{0, 0};
  double r_in = 0.0, r_out = 0.0;
  double t_out = 0.0, t_in = 0.0;

  static constexpr double shape_constant = 1.5;  // max slope of the cubic ramp

  double psi(const Point& x) const;
  double zeta(double t) const;
  double phi(const Point& x, double t) const { return psi(x) * zeta(t); }

  /// Radial derivative magnitude |psi'(|x - x0|)|.
  double dpsi(const Point& x) const;
  double dzeta(double t) const;
  /// (d/dt) phi^p(x,t), evaluated analytically.
  double dphi_p_dt(const Point& x, double t, double p) const;
};

CutoffSpec build_cutoff(double r_in, double r_out, double t_out, double t_in,
                        const Point& x0);

}  // namespace fplab

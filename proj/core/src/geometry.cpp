#include "fplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fplab {

double dist(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

double Mesh::volume() const {
  double v = 1.0;
  for (int d = 0; d < dim; ++d) v *= outer_hi[d] - outer_lo[d];
  return v;
}

double Mesh::domain_radius() const {
  double r = 0.0;
  for (int d = 0; d < dim; ++d) r = std::max(r, 0.5 * (hi[d] - lo[d]));
  return r;
}

double Mesh::outer_radius() const {
  double r = 0.0;
  for (int d = 0; d < dim; ++d) r = std::max(r, 0.5 * (outer_hi[d] - outer_lo[d]));
  return r;
}

std::vector<std::size_t> Mesh::ball(const Point& x0, double r) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (dist(coords[i], x0) < r) out.push_back(i);
  return out;
}

std::vector<std::size_t> Mesh::outside_ball(const Point& x0, double r) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (dist(coords[i], x0) >= r) out.push_back(i);
  return out;
}

std::vector<std::size_t> Mesh::all_nodes() const {
  std::vector<std::size_t> out(coords.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

bool Mesh::contains_ball(const Point& x0, double r) const {
  for (int d = 0; d < dim; ++d) {
    if (x0[d] - r < outer_lo[d] - 1e-12 || x0[d] + r > outer_hi[d] + 1e-12)
      return false;
  }
  return true;
}

Mesh build_mesh(int dim, const Point& lo, const Point& hi, double h, double r_ext) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_mesh: dim must be 1 or 2");
  if (!(h > 0.0)) throw std::invalid_argument("build_mesh: spacing h must be positive");
  for (int d = 0; d < dim; ++d)
    if (!(hi[d] > lo[d])) throw std::invalid_argument("build_mesh: degenerate domain extents");

  Mesh m;
  m.dim = dim;
  m.h = h;
  m.lo = lo;
  m.hi = hi;
  m.r_ext = r_ext;
  for (int d = 0; d < dim; ++d) m.center[d] = 0.5 * (lo[d] + hi[d]);

  const double radius = m.domain_radius();
  if (!(r_ext > radius))
    throw std::invalid_argument("build_mesh: r_ext smaller than the domain radius");
  if (!(r_ext >= radius + h))
    throw std::invalid_argument("build_mesh: r_ext leaves no room for an exterior band");

  // Grid-align the outer box: an integer number of cells, at least covering r_ext.
  const int n_cells = static_cast<int>(std::ceil(2.0 * r_ext / h - 1e-9));
  std::array<int, 2> nc{1, 1};
  for (int d = 0; d < dim; ++d) {
    nc[d] = n_cells;
    m.outer_lo[d] = m.center[d] - 0.5 * n_cells * h;
    m.outer_hi[d] = m.center[d] + 0.5 * n_cells * h;
  }
  m.cells = nc;

  const double cell_measure = (dim == 1) ? h : h * h;
  const int ny = (dim == 2) ? nc[1] : 1;
  m.coords.reserve(static_cast<std::size_t>(nc[0]) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nc[0]; ++i) {
      Point x{m.outer_lo[0] + (i + 0.5) * h, 0.0};
      if (dim == 2) x[1] = m.outer_lo[1] + (j + 0.5) * h;
      bool inside = true;
      for (int d = 0; d < dim; ++d)
        inside = inside && (x[d] > lo[d] && x[d] < hi[d]);
      const std::size_t id = m.coords.size();
      m.coords.push_back(x);
      m.measure.push_back(cell_measure);
      m.interior.push_back(inside ? 1 : 0);
      (inside ? m.interior_nodes : m.exterior_nodes).push_back(id);
    }
  }

  if (m.exterior_nodes.empty())
    throw std::invalid_argument("build_mesh: exterior band is empty");
  return m;
}

Cylinder scale_cylinder(const Cylinder& q, double lambda, double s, double p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale_cylinder: lambda must be positive");
  Cylinder out = q;
  out.r = lambda * q.r;
  out.duration = std::pow(lambda, s * p) * q.duration;
  return out;
}

namespace {
// Cubic smoothstep on [0,1]; slope peaks at 1.5.
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}
double smoothstep_slope(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 6.0 * t * (1.0 - t);
}
}  // namespace

double CutoffSpec::psi(const Point& x) const {
  const double d = dist(x, x0);
  return smoothstep((r_out - d) / (r_out - r_in));
}

double CutoffSpec::dpsi(const Point& x) const {
  const double d = dist(x, x0);
  return smoothstep_slope((r_out - d) / (r_out - r_in)) / (r_out - r_in);
}

double CutoffSpec::zeta(double t) const {
  return smoothstep((t - t_out) / (t_in - t_out));
}

double CutoffSpec::dzeta(double t) const {
  return smoothstep_slope((t - t_out) / (t_in - t_out)) / (t_in - t_out);
}

double CutoffSpec::dphi_p_dt(const Point& x, double t, double p) const {
  const double ps = psi(x);
  const double z = zeta(t);
  if (ps == 0.0 || z == 0.0) return 0.0;
  return std::pow(ps, p) * p * std::pow(z, p - 1.0) * dzeta(t);
}

CutoffSpec build_cutoff(double r_in, double r_out, double t_out, double t_in,
                        const Point& x0) {
  if (!(0.0 < r_in && r_in < r_out))
    throw std::invalid_argument("build_cutoff: need 0 < r_in < r_out");
  if (!(t_out < t_in))
    throw std::invalid_argument("build_cutoff: need t_out < t_in");
  CutoffSpec c;
  c.x0 = x0;
  c.r_in = r_in;
  c.r_out = r_out;
  c.t_out = t_out;
  c.t_in = t_in;
  return c;
}

}  // namespace fplab

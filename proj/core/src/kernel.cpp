#include "fplab/kernel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fplab {

namespace {

struct Wave {
  double kx, ky, omega, phase;
};

Wave wave_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Wave w;
  w.kx = 1.0 + 2.0 * uni(rng);
  w.ky = 1.0 + 2.0 * uni(rng);
  w.omega = 2.0 * uni(rng);
  w.phase = 2.0 * M_PI * uni(rng);
  return w;
}

}  // namespace

bool KernelSpec::time_dependent() const {
  if (form == Form::canonical) return false;
  return wave_from_seed(seed).omega != 0.0;
}

double KernelSpec::modulation(const Point& x, const Point& y, double t) const {
  if (form == Form::canonical) return 1.0;
  const Wave w = wave_from_seed(seed);
  double amp = amplitude;
  if (amp < 0.0) amp = (lambda - 1.0) / (lambda + 1.0);
  // symmetric in (x, y) through the sum x + y
  double a = 1.0 + amp * std::sin(w.kx * (x[0] + y[0]) + w.ky * (x[1] + y[1]) +
                                  w.omega * t + w.phase);
  if (clip) a = std::min(lambda, std::max(1.0 / lambda, a));
  return a;
}

double KernelSpec::eval(int n, const Point& x, const Point& y, double t) const {
  const double r = dist(x, y);
  if (r == 0.0) throw std::invalid_argument("KernelSpec::eval: x == y hits the singularity");
  return modulation(x, y, t) * std::pow(r, -(n + s * p));
}

KernelSpec make_kernel(double s, double p, double lambda, KernelSpec::Form form,
                       std::uint64_t seed) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("kernel: s must lie in (0,1)");
  if (!(p >= 2.0)) throw std::invalid_argument("kernel: p must be >= 2");
  if (!(lambda >= 1.0)) throw std::invalid_argument("kernel: lambda must be >= 1");
  KernelSpec k;
  k.s = s;
  k.p = p;
  k.lambda = lambda;
  k.form = form;
  k.seed = seed;
  return k;
}

KernelSpec::Form kernel_form_from_string(const std::string& name) {
  if (name == "canonical") return KernelSpec::Form::canonical;
  if (name == "modulated") return KernelSpec::Form::modulated;
  throw std::invalid_argument("unknown kernel form: " + name);
}

std::string to_string(KernelSpec::Form form) {
  return form == KernelSpec::Form::canonical ? "canonical" : "modulated";
}

EllipticityReport validate_ellipticity(const KernelSpec& spec, const Mesh& mesh,
                                       std::size_t samples,
                                       std::uint64_t sample_seed) {
  if (samples < 1) throw std::invalid_argument("validate_ellipticity: samples >= 1 required");
  std::mt19937_64 rng(sample_seed);
  std::uniform_int_distribution<std::size_t> pick(0, mesh.n_nodes() - 1);
  std::uniform_real_distribution<double> time(0.0, 1.0);

  EllipticityReport rep;
  rep.samples = samples;
  const double tol = 1e-12;
  double worst_dev = 1.0;  // max(ratio, 1/ratio)
  for (std::size_t k = 0; k < samples; ++k) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) j = (j + 1) % mesh.n_nodes();
    const double t = time(rng);
    const double r = dist(mesh.point(i), mesh.point(j));
    const double ratio = spec.eval(mesh.dim, mesh.point(i), mesh.point(j), t) /
                         std::pow(r, -(mesh.dim + spec.s * spec.p));
    const double dev = (ratio <= 0.0) ? std::numeric_limits<double>::infinity()
                                      : std::max(ratio, 1.0 / ratio);
    if (dev > worst_dev) {
      worst_dev = dev;
      rep.worst_ratio = ratio;
      rep.witness_i = i;
      rep.witness_j = j;
      rep.witness_t = t;
    }
    if (!(ratio >= 1.0 / spec.lambda - tol && ratio <= spec.lambda + tol))
      rep.pass = false;
  }
  if (worst_dev == 1.0) rep.worst_ratio = 1.0;
  return rep;
}

}  // namespace fplab

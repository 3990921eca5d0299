#pragma once

#include <cstdint>
#include <string>

#include "fplab/geometry.hpp"

namespace fplab {

/// Kernel family comparable to |x-y|^{-(n+sp)} within the two-sided
/// ellipticity bound with constant lambda. The modulated form multiplies the
/// canonical kernel by a smooth symmetric coefficient a(x,y,t) drawn from a
/// seeded wave; by default its amplitude keeps a inside [1/lambda, lambda].
struct KernelSpec {
  enum class Form { canonical, modulated };

  double s = 0.5;
  double p = 2.0;
  double lambda = 1.0;
  Form form = Form::canonical;
  std::uint64_t seed = 0;

  // amplitude < 0 means the sandwich-safe default (lambda-1)/(lambda+1).
  // Setting it larger with clip=false builds deliberately broken kernels
  // for validator tests.
  double amplitude = -1.0;
  bool clip = true;

  bool time_dependent() const;
  double modulation(const Point& x, const Point& y, double t) const;
  /// K(x,y,t) for mesh dimension n. Throws on x == y.
  double eval(int n, const Point& x, const Point& y, double t) const;
};

KernelSpec make_kernel(double s, double p, double lambda,
                       KernelSpec::Form form = KernelSpec::Form::canonical,
                       std::uint64_t seed = 0);

KernelSpec::Form kernel_form_from_string(const std::string& name);
std::string to_string(KernelSpec::Form form);

struct EllipticityReport {
  bool pass = true;
  double worst_ratio = 1.0;   // K * |x-y|^{n+sp} farthest from 1 (log scale)
  std::size_t witness_i = 0;
  std::size_t witness_j = 0;
  double witness_t = 0.0;
  std::size_t samples = 0;
};

/// Samples random node pairs and times and checks the ellipticity sandwich.
EllipticityReport validate_ellipticity(const KernelSpec& spec, const Mesh& mesh,
                                       std::size_t samples,
                                       std::uint64_t sample_seed = 12345);

}  // namespace fplab

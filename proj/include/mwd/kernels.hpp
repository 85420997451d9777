#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "mwd/fourier.hpp"

namespace mwd {

enum class KernelFamily { kRegularSmooth, kSuperSmooth, kBoxcar, kDirect };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

class KernelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Blur kernel given through its Fourier multiplier.
///
///   regular_smooth  (1 + |m|)^-nu                      theta = 0, nu > 0
///   super_smooth    (1 + |m|)^-nu exp(-theta |m|^beta)  theta > 0, beta > 0
///   boxcar          sin(pi m c) / (pi m c)              c > 0
///   direct          1
struct KernelSpec {
  KernelFamily family = KernelFamily::kDirect;
  double nu = 0.0;
  double theta = 0.0;
  double beta = 1.0;
  double c = 0.0;

  static KernelSpec direct() { return {}; }
  static KernelSpec regular_smooth(double nu) { return {KernelFamily::kRegularSmooth, nu, 0.0, 1.0, 0.0}; }
  static KernelSpec super_smooth(double nu, double theta, double beta) {
    return {KernelFamily::kSuperSmooth, nu, theta, beta, 0.0};
  }
  static KernelSpec boxcar(double c) { return {KernelFamily::kBoxcar, 0.0, 0.0, 1.0, c}; }

  /// Throws KernelError if the parameters break the family's invariants.
  void validate() const;

  /// Degree of ill-posedness used by the scale rules; box-car kernels report 0.
  double dip() const { return family == KernelFamily::kDirect ? 0.0 : nu; }
};

/// Badly approximable box-car widths used by default: (sqrt5-1)/2, sqrt2-1, sqrt3-1.
double default_boxcar_width(std::size_t channel);

complex fourier_multiplier(const KernelSpec& kernel, long m);

/// Multiplier table g_m for m = 0..n/2.
std::vector<complex> multiplier_table(const KernelSpec& kernel, std::size_t n);

/// Circular convolution on the grid via h_m = g_m f_m.
Signal convolve(std::span<const double> signal, const KernelSpec& kernel);

/// Distance to the nearest integer.
double nearest_integer_distance(double x);

/// Sandwich 2||mc|| / |pi mc| <= |sin(pi mc)/(pi mc)| <= ||mc|| / |mc|.
std::pair<double, double> boxcar_coeff_bounds(long m, double c);

}  // namespace mwd

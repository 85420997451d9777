#include "mwd/kernels.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace mwd {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::kRegularSmooth: return "regular_smooth";
    case KernelFamily::kSuperSmooth: return "super_smooth";
    case KernelFamily::kBoxcar: return "boxcar";
    case KernelFamily::kDirect: return "direct";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "regular_smooth") return KernelFamily::kRegularSmooth;
  if (name == "super_smooth") return KernelFamily::kSuperSmooth;
  if (name == "boxcar") return KernelFamily::kBoxcar;
  if (name == "direct") return KernelFamily::kDirect;
  throw KernelError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  auto fail = [this](const std::string& what) {
    throw KernelError(std::string(to_string(family)) + " kernel: " + what);
  };
  if (!std::isfinite(nu) || !std::isfinite(theta) || !std::isfinite(beta) || !std::isfinite(c))
    fail("parameters must be finite");
  switch (family) {
    case KernelFamily::kRegularSmooth:
      if (theta != 0.0) fail("theta must be 0");
      if (!(nu > 0.0)) fail("nu must be positive");
      break;
    case KernelFamily::kSuperSmooth:
      if (!(theta > 0.0)) fail("theta must be positive");
      if (!(beta > 0.0)) fail("beta must be positive");
      break;
    case KernelFamily::kBoxcar:
      if (!(c > 0.0)) fail("width c must be positive");
      break;
    case KernelFamily::kDirect:
      break;
  }
}

double default_boxcar_width(std::size_t channel) {
  static const std::array<double, 3> widths = {(std::sqrt(5.0) - 1.0) / 2.0, std::sqrt(2.0) - 1.0,
                                               std::sqrt(3.0) - 1.0};
  return widths[channel % widths.size()];
}

complex fourier_multiplier(const KernelSpec& kernel, long m) {
  const double a = std::abs(static_cast<double>(m));
  switch (kernel.family) {
    case KernelFamily::kDirect: return 1.0;
    case KernelFamily::kRegularSmooth: return std::pow(1.0 + a, -kernel.nu);
    case KernelFamily::kSuperSmooth:
      return std::pow(1.0 + a, -kernel.nu) * std::exp(-kernel.theta * std::pow(a, kernel.beta));
    case KernelFamily::kBoxcar: {
      if (m == 0) return 1.0;
      // Reduce m c modulo 1 first so sin(pi m c) is exactly 0 at integer m c.
      const double t = a * kernel.c;
      const double k = std::round(t);
      const double s = std::sin(kPi * (t - k));
      return (std::fmod(k, 2.0) == 0.0 ? s : -s) / (kPi * t);
    }
  }
  return 0.0;
}

std::vector<complex> multiplier_table(const KernelSpec& kernel, std::size_t n) {
  std::vector<complex> g(n / 2 + 1);
  for (std::size_t m = 0; m < g.size(); ++m) g[m] = fourier_multiplier(kernel, static_cast<long>(m));
  return g;
}

Signal convolve(std::span<const double> signal, const KernelSpec& kernel) {
  require_grid(signal.size());
  kernel.validate();
  if (kernel.family == KernelFamily::kDirect) return Signal(signal.begin(), signal.end());
  HalfSpectrum spec = analyze(signal);
  const auto g = multiplier_table(kernel, signal.size());
  for (std::size_t m = 0; m < g.size(); ++m) spec.bin(m) *= g[m];
  return synthesize(spec);
}

double nearest_integer_distance(double x) { return std::abs(x - std::round(x)); }

std::pair<double, double> boxcar_coeff_bounds(long m, double c) {
  if (m == 0) throw std::invalid_argument("boxcar_coeff_bounds: m must be nonzero");
  const double mc = static_cast<double>(m) * c;
  const double dist = nearest_integer_distance(mc);
  return {2.0 * dist / std::abs(kPi * mc), dist / std::abs(mc)};
}

}  // namespace mwd

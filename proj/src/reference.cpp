#include "mwd/reference.hpp"

#include <cmath>

namespace mwd::reference {

WaveletCoeffs direct_analysis(std::span<const double> signal, int j0, int j1) {
  const std::size_t n = signal.size();
  require_grid(n);
  if (j1 >= grid_level(n) || j0 < 0) throw TransformError("levels out of range");
  const HalfSpectrum f = analyze(signal);
  WaveletCoeffs out(j0, j1);
  const long half = f.max_frequency();
  auto a = out.scaling();
  for (std::size_t k = 0; k < a.size(); ++k) {
    complex acc = 0.0;
    for (long m = -half; m <= half; ++m) acc += f.at(m) * std::conj(phi_fourier_coeff(j0, static_cast<long>(k), m));
    a[k] = acc.real();
  }
  for (int j = j0; j <= j1; ++j) {
    auto b = out.detail(j);
    for (std::size_t k = 0; k < b.size(); ++k) {
      complex acc = 0.0;
      for (long m = -half; m <= half; ++m)
        acc += f.at(m) * std::conj(psi_fourier_coeff(j, static_cast<long>(k), m));
      b[k] = acc.real();
    }
  }
  return out;
}

namespace {

// Real part of sum_m c_m exp(2 pi i m t) over |m| <= top, c given by coeff(m).
template <class Coeff>
double fourier_series(Coeff coeff, long top, double t) {
  complex acc = 0.0;
  for (long m = -top; m <= top; ++m) {
    const complex c = coeff(m);
    if (c != complex{}) acc += c * std::polar(1.0, 2.0 * kPi * static_cast<double>(m) * t);
  }
  return acc.real();
}

}  // namespace

Signal direct_synthesis(const WaveletCoeffs& coeffs, std::size_t n) {
  require_grid(n);
  Signal out(n, 0.0);
  const int j0 = coeffs.coarse_level();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    double v = 0.0;
    const auto a = coeffs.scaling();
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] == 0.0) continue;
      v += a[k] * fourier_series([&](long m) { return phi_fourier_coeff(j0, static_cast<long>(k), m); },
                                 scaling_high(j0), t);
    }
    for (int j = j0; j <= coeffs.fine_level(); ++j) {
      const auto b = coeffs.detail(j);
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (b[k] == 0.0) continue;
        v += b[k] * fourier_series([&](long m) { return psi_fourier_coeff(j, static_cast<long>(k), m); },
                                   cj_high(j), t);
      }
    }
    out[i] = v;
  }
  return out;
}

Signal circular_convolve(std::span<const double> signal, const KernelSpec& kernel) {
  const std::size_t n = signal.size();
  require_grid(n);
  const long half = static_cast<long>(n / 2);
  // kappa_s = n^-1 [g_0 + 2 sum_{0<m<n/2} Re(g_m e^{2 pi i m s/n}) + g_{n/2} (-1)^s]
  std::vector<double> kappa(n);
  for (std::size_t s = 0; s < n; ++s) {
    double v = fourier_multiplier(kernel, 0).real();
    for (long m = 1; m < half; ++m) {
      const double angle = 2.0 * kPi * static_cast<double>((m * static_cast<long>(s)) % static_cast<long>(n)) /
                           static_cast<double>(n);
      v += 2.0 * (fourier_multiplier(kernel, m) * std::polar(1.0, angle)).real();
    }
    if (n > 1) v += fourier_multiplier(kernel, half).real() * (s % 2 == 0 ? 1.0 : -1.0);
    kappa[s] = v / static_cast<double>(n);
  }
  Signal out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < n; ++t) out[i] += signal[t] * kappa[(i + n - t) % n];
  return out;
}

CellResult run_cell_serial(std::span<const double> truth, const std::vector<ChannelSpec>& channels,
                           const EstimatorConfig& config, const CellOptions& options) {
  std::vector<ReplicateOutcome> outcomes;
  for (std::size_t r = 0; r < options.reps; ++r) outcomes.push_back(run_replicate(truth, channels, config, options, r));
  return summarize(outcomes, options.antithetic);
}

}  // namespace mwd::reference

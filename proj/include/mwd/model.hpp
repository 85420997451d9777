#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mwd/fourier.hpp"
#include "mwd/kernels.hpp"
#include "mwd/noise.hpp"

namespace mwd {

/// One observation channel: blur kernel plus long-memory noise.
struct ChannelSpec {
  KernelSpec kernel;
  LrdSpec lrd;

  void validate() const {
    kernel.validate();
    lrd.validate();
  }
};

/// Multichannel observation y_l = K_l f + sigma_l * (unit variance LRD noise) on an n-point grid.
///
/// sigma holds the time-domain scale actually injected; spectral_sigma the matching
/// level of the sequence-space model, where the noise in y_{m,l} has variance
/// spectral_sigma_l^2 n^-alpha_l |m|^(alpha_l - 1).
struct MultichannelObservation {
  std::size_t n = 0;
  std::vector<ChannelSpec> channels;
  std::vector<Signal> samples;
  std::vector<HalfSpectrum> spectra;
  std::vector<double> sigma;
  std::vector<double> spectral_sigma;

  std::size_t channel_count() const { return channels.size(); }

  /// Throws std::invalid_argument if the per-channel arrays disagree.
  void validate() const;
};

/// Builds an observation from stored time samples, recomputing the spectra.
MultichannelObservation make_observation(std::vector<ChannelSpec> channels, std::vector<Signal> samples,
                                         std::vector<double> sigma);

/// Blur f by each kernel, calibrate sigma_l to snr_db against the blurred channel,
/// and add sigma_l times an LRD series drawn from derive_seed(seed, {kObservation, l}).
///
/// snr_db = +inf gives noiseless channels. NaN keeps each channel's lrd.sigma.
/// noise_sign = -1 flips the noise, producing the antithetic partner of a draw.
MultichannelObservation simulate(std::span<const double> f, const std::vector<ChannelSpec>& channels,
                                 double snr_db, std::uint64_t seed, double noise_sign = 1.0);

/// y_{m,l} for m = -n/2 .. n/2 - 1, one vector per channel, in that order.
std::vector<std::vector<complex>> sequence_coeffs(const MultichannelObservation& obs);

/// Probe y~_m = g_m + noise_m for m = 0..n/2, the noise independent of the
/// observation but identically distributed. sigma is the time-domain scale;
/// zero gives the exact multiplier.
std::vector<complex> probe_channel(const KernelSpec& kernel, const LrdSpec& lrd, std::size_t n, double sigma,
                                   std::uint64_t seed, double noise_sign = 1.0);

/// Probes for every channel of an observation, seeded by derive_seed(seed, {kProbe, l}).
std::vector<std::vector<complex>> probe_channels(const MultichannelObservation& obs, std::uint64_t seed,
                                                 double noise_sign = 1.0);

}  // namespace mwd

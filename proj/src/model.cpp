#include "mwd/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mwd {

void MultichannelObservation::validate() const {
  const std::size_t m = channels.size();
  if (m == 0) throw std::invalid_argument("observation has no channels");
  if (samples.size() != m || spectra.size() != m || sigma.size() != m || spectral_sigma.size() != m)
    throw std::invalid_argument("observation arrays disagree on the channel count");
  for (std::size_t l = 0; l < m; ++l) {
    if (samples[l].size() != n || spectra[l].grid_size() != n)
      throw std::invalid_argument("channel " + std::to_string(l) + " has the wrong length");
    channels[l].validate();
  }
}

MultichannelObservation make_observation(std::vector<ChannelSpec> channels, std::vector<Signal> samples,
                                         std::vector<double> sigma) {
  if (channels.empty()) throw std::invalid_argument("observation has no channels");
  MultichannelObservation obs;
  obs.n = samples.empty() ? 0 : samples.front().size();
  require_grid(obs.n);
  obs.channels = std::move(channels);
  obs.samples = std::move(samples);
  obs.sigma = std::move(sigma);
  if (obs.sigma.size() != obs.channels.size())
    throw std::invalid_argument("one sigma per channel is required");
  for (std::size_t l = 0; l < obs.channels.size(); ++l) {
    if (l < obs.samples.size()) obs.spectra.push_back(analyze(obs.samples[l]));
    LrdSpec lrd = obs.channels[l].lrd;
    lrd.sigma = obs.sigma[l];
    obs.spectral_sigma.push_back(spectral_sigma(lrd));
  }
  obs.validate();
  return obs;
}

MultichannelObservation simulate(std::span<const double> f, const std::vector<ChannelSpec>& channels,
                                 double snr, std::uint64_t seed, double noise_sign) {
  require_grid(f.size());
  if (channels.empty()) throw std::invalid_argument("simulate: at least one channel is required");
  const std::size_t n = f.size();
  std::vector<Signal> samples;
  std::vector<double> sigma;
  for (std::size_t l = 0; l < channels.size(); ++l) {
    const ChannelSpec& ch = channels[l];
    ch.validate();
    Signal y = convolve(f, ch.kernel);
    double s = ch.lrd.sigma;
    if (!std::isnan(snr)) {
      if (grid_norm(y) == 0.0 && std::isfinite(snr))
        throw std::invalid_argument("simulate: blurred signal is zero, SNR undefined");
      s = calibrate_sigma(y, snr);
    }
    if (s > 0.0) {
      const auto z = lrd_series(ch.lrd, n, derive_seed(seed, {stream::kObservation, l}));
      for (std::size_t i = 0; i < n; ++i) y[i] += noise_sign * s * z[i];
    }
    samples.push_back(std::move(y));
    sigma.push_back(s);
  }
  return make_observation(channels, std::move(samples), std::move(sigma));
}

std::vector<std::vector<complex>> sequence_coeffs(const MultichannelObservation& obs) {
  std::vector<std::vector<complex>> out;
  const long half = static_cast<long>(obs.n / 2);
  for (const auto& spec : obs.spectra) {
    std::vector<complex> y;
    y.reserve(obs.n);
    for (long m = -half; m < half; ++m) {
      // Full (unsplit) Nyquist bin at -n/2 so the coefficients are the plain DFT / n.
      y.push_back(m == -half ? spec.bin(static_cast<std::size_t>(half)) : spec.at(m));
    }
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<complex> probe_channel(const KernelSpec& kernel, const LrdSpec& lrd, std::size_t n, double sigma,
                                   std::uint64_t seed, double noise_sign) {
  require_grid(n);
  auto y = multiplier_table(kernel, n);
  if (sigma > 0.0) {
    auto z = lrd_series(lrd, n, seed);
    for (double& v : z) v *= noise_sign * sigma;
    const HalfSpectrum w = analyze(z);
    for (std::size_t m = 0; m < y.size(); ++m) y[m] += w.bin(m);
  }
  return y;
}

std::vector<std::vector<complex>> probe_channels(const MultichannelObservation& obs, std::uint64_t seed,
                                                 double noise_sign) {
  std::vector<std::vector<complex>> out;
  for (std::size_t l = 0; l < obs.channel_count(); ++l)
    out.push_back(probe_channel(obs.channels[l].kernel, obs.channels[l].lrd, obs.n, obs.sigma[l],
                                derive_seed(seed, {stream::kProbe, l}), noise_sign));
  return out;
}

}  // namespace mwd

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mwd/fourier.hpp"

namespace mwd {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derive an independent sub-seed from a master seed and a path of counters,
/// e.g. derive_seed(master, {stream, replicate, channel}). Distinct paths give
/// unrelated streams; the same path always gives the same seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Stream tags for derive_seed.
namespace stream {
inline constexpr std::uint64_t kObservation = 0x6f6273;  // "obs"
inline constexpr std::uint64_t kProbe = 0x707262;        // "prb"
inline constexpr std::uint64_t kReplicate = 0x726570;    // "rep"
}  // namespace stream

enum class NoiseGenerator { kFgnCirculant, kFarima };

std::string_view to_string(NoiseGenerator g);
NoiseGenerator noise_generator_from_string(std::string_view name);

class NoiseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Long-range dependence parameters of one channel. alpha = 1 is white noise;
/// smaller alpha means stronger dependence.
struct LrdSpec {
  double alpha = 1.0;
  double sigma = 1.0;
  NoiseGenerator generator = NoiseGenerator::kFarima;

  double hurst() const { return 1.0 - 0.5 * alpha; }
  double farima_d() const { return 0.5 * (1.0 - alpha); }
  void validate() const;
};

/// gamma(k) = (|k+1|^2H + |k-1|^2H - 2|k|^2H) / 2, unit variance at lag 0.
double fgn_autocovariance(long k, double hurst);

/// Exact fractional Gaussian noise by circulant embedding of size 2n.
std::vector<double> fgn_increments(std::size_t n, double hurst, std::uint64_t seed);

/// MA(infinity) weights of FARIMA(0,d,0): c_0 = 1, c_k = c_{k-1} (k - 1 + d) / k.
std::vector<double> farima_coefficients(double d, std::size_t count);

/// FARIMA(0,d,0) of length n from the MA weights truncated at K = max(truncation, 10n),
/// rescaled to unit sample variance.
std::vector<double> farima_series(std::size_t n, double d, std::uint64_t seed, std::size_t truncation = 0);

/// Unit-variance LRD series from the generator named in spec (sigma is ignored).
std::vector<double> lrd_series(const LrdSpec& spec, std::size_t n, std::uint64_t seed);

/// Low-frequency spectral constant C of the unit-variance generator: its spectral
/// density in cycles per sample behaves like C |lambda|^(alpha - 1) near 0.
double spectral_constant(NoiseGenerator generator, double alpha);

/// Noise level seen by the sequence-space model: a time-domain series
/// sigma * (unit variance LRD) has Fourier coefficients with variance
/// close to spectral_sigma^2 n^-alpha |m|^(alpha - 1).
double spectral_sigma(const LrdSpec& spec);

/// sigma = ||blurred||_2 10^(-snr_db / 20). Infinite snr gives 0.
double calibrate_sigma(std::span<const double> blurred, double snr_db);

/// 10 log10(||blurred||^2 / sigma^2).
double snr_db(std::span<const double> blurred, double sigma);

/// Median absolute deviation about the median (unscaled).
double median_absolute_deviation(std::vector<double> values);

/// Sum over the finest level J-1 of |Psi_m|^2 n^-alpha |m|^(alpha-1): the
/// variance of a level-(J-1) detail coefficient per unit of squared spectral sigma.
double finest_level_noise_gain(std::size_t n, double alpha);

/// Noise level from the finest-level Meyer detail coefficients of an observation:
/// MAD(d_{J-1,k}) / 0.6745, divided by sqrt(finest_level_noise_gain) so that the
/// result estimates spectral_sigma. Requires n = 2^J with J >= 4.
double estimate_sigma_mad(std::span<const double> observation, double alpha = 1.0);

}  // namespace mwd

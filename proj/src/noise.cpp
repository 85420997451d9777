#include "mwd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "mwd/meyer.hpp"

namespace mwd {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

std::string_view to_string(NoiseGenerator g) {
  switch (g) {
    case NoiseGenerator::kFgnCirculant: return "fgn";
    case NoiseGenerator::kFarima: return "farima";
  }
  return "unknown";
}

NoiseGenerator noise_generator_from_string(std::string_view name) {
  if (name == "fgn") return NoiseGenerator::kFgnCirculant;
  if (name == "farima") return NoiseGenerator::kFarima;
  throw NoiseError("unknown noise generator '" + std::string(name) + "'");
}

void LrdSpec::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw NoiseError("alpha must lie in (0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw NoiseError("sigma must be finite and non-negative");
}

double fgn_autocovariance(long k, double hurst) {
  const double a = std::abs(static_cast<double>(k));
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(a + 1.0, h2) + std::pow(std::abs(a - 1.0), h2) - 2.0 * std::pow(a, h2));
}

namespace {

std::vector<double> gaussian_vector(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(count);
  for (double& v : z) v = normal(rng);
  return z;
}

std::size_t next_pow2(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

// Circulant eigenvalues for fGn, cached per (n, H).
std::shared_ptr<const std::vector<double>> circulant_eigenvalues(std::size_t n, double hurst) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, double>, std::shared_ptr<const std::vector<double>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, hurst});
    if (it != cache.end()) return it->second;
  }
  const std::size_t big = 2 * n;
  std::vector<complex> row(big);
  for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(static_cast<long>(k), hurst);
  for (std::size_t k = n + 1; k < big; ++k) row[k] = row[big - k];
  fft::complex_dft(row, -1);
  const auto& lam_c = row;
  auto lam = std::make_shared<std::vector<double>>(big);
  std::size_t clipped = 0;
  for (std::size_t k = 0; k < big; ++k) {
    double v = lam_c[k].real();
    if (v < 0.0) {
      if (v < -1e-10) ++clipped;
      v = 0.0;
    }
    (*lam)[k] = v;
  }
  if (clipped > 0)
    std::cerr << "warning: fgn circulant embedding clipped " << clipped << " negative eigenvalues (n=" << n
              << ", H=" << hurst << ")\n";
  std::lock_guard<std::mutex> lock(mu);
  cache[{n, hurst}] = lam;
  return lam;
}

// FFT of the truncated MA filter on a grid of size L, cached per (d, K, L).
std::shared_ptr<const std::vector<complex>> farima_filter(double d, std::size_t k, std::size_t len) {
  using Key = std::tuple<double, std::size_t, std::size_t>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const std::vector<complex>>> cache;
  const Key key{d, k, len};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const auto c = farima_coefficients(d, k + 1);
  std::vector<double> padded(len, 0.0);
  std::copy(c.begin(), c.end(), padded.begin());
  auto h = std::make_shared<std::vector<complex>>(len / 2 + 1);
  fft::real_forward(padded, *h);
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = h;
  return h;
}

}  // namespace

std::vector<double> fgn_increments(std::size_t n, double hurst, std::uint64_t seed) {
  if (n == 0) throw NoiseError("fgn_increments: n must be positive");
  if (!(hurst > 0.0 && hurst < 1.0)) throw NoiseError("fgn_increments: H must lie in (0, 1)");
  const auto lam = circulant_eigenvalues(n, hurst);
  const std::size_t big = 2 * n;
  const auto z = gaussian_vector(2 * big, seed);
  std::vector<complex> w(big);
  for (std::size_t k = 0; k < big; ++k)
    w[k] = std::sqrt((*lam)[k] / static_cast<double>(big)) * complex(z[2 * k], z[2 * k + 1]);
  fft::complex_dft(w, -1);
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = w[t].real();
  return x;
}

std::vector<double> farima_coefficients(double d, std::size_t count) {
  std::vector<double> c(count);
  if (count == 0) return c;
  c[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k)
    c[k] = c[k - 1] * (static_cast<double>(k) - 1.0 + d) / static_cast<double>(k);
  return c;
}

std::vector<double> farima_series(std::size_t n, double d, std::uint64_t seed, std::size_t truncation) {
  if (n < 2) throw NoiseError("farima_series: n must be at least 2");
  if (!(d >= 0.0 && d < 0.5)) throw NoiseError("farima_series: d must lie in [0, 0.5)");
  const std::size_t k = std::max(truncation, 10 * n);
  const std::size_t len = next_pow2(n + k);
  const auto h = farima_filter(d, k, len);
  // Innovations e_0..e_{n+K-1}; output x_t = sum_{i<=K} c_i e_{t-i} for t in [K, K+n).
  auto e = gaussian_vector(n + k, seed);
  e.resize(len, 0.0);
  std::vector<complex> spec(len / 2 + 1);
  fft::real_forward(e, spec);
  // Unnormalized round trip: divide by len once.
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= (*h)[i] / static_cast<double>(len);
  std::vector<double> full(len);
  fft::real_backward(spec, full);
  std::vector<double> x(full.begin() + static_cast<long>(k), full.begin() + static_cast<long>(k + n));
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (sd > 0.0)
    for (double& v : x) v /= sd;
  return x;
}

std::vector<double> lrd_series(const LrdSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  switch (spec.generator) {
    case NoiseGenerator::kFgnCirculant: return fgn_increments(n, spec.hurst(), seed);
    case NoiseGenerator::kFarima: return farima_series(n, spec.farima_d(), seed);
  }
  throw NoiseError("unknown generator");
}

double spectral_constant(NoiseGenerator generator, double alpha) {
  const double h = 1.0 - 0.5 * alpha;
  switch (generator) {
    case NoiseGenerator::kFgnCirculant:
      return std::tgamma(2.0 * h + 1.0) * std::sin(kPi * h) * std::pow(2.0 * kPi, 1.0 - 2.0 * h);
    case NoiseGenerator::kFarima: {
      const double d = 0.5 * (1.0 - alpha);
      const double g = std::tgamma(1.0 - d);
      return std::pow(2.0 * kPi, -2.0 * d) * g * g / std::tgamma(1.0 - 2.0 * d);
    }
  }
  return 1.0;
}

double spectral_sigma(const LrdSpec& spec) {
  return spec.sigma * std::sqrt(spectral_constant(spec.generator, spec.alpha));
}

double calibrate_sigma(std::span<const double> blurred, double snr) {
  if (std::isinf(snr) && snr > 0) return 0.0;
  if (!std::isfinite(snr)) throw NoiseError("snr must be finite or +inf");
  return grid_norm(blurred) * std::pow(10.0, -snr / 20.0);
}

double snr_db(std::span<const double> blurred, double sigma) {
  const double norm = grid_norm(blurred);
  return 20.0 * std::log10(norm / sigma);
}

double median_absolute_deviation(std::vector<double> values) {
  if (values.empty()) throw NoiseError("median_absolute_deviation: empty input");
  auto median = [](std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    return 0.5 * (lo + hi);
  };
  const double med = median(values);
  for (double& v : values) v = std::abs(v - med);
  return median(values);
}

double finest_level_noise_gain(std::size_t n, double alpha) {
  require_grid(n, 16);
  const int j = grid_level(n) - 1;
  const long half = static_cast<long>(n / 2);
  const double scale = std::pow(static_cast<double>(n), -alpha);
  double gain = 0.0;
  for (long m = cj_low(j); m <= std::min(cj_high(j), half); ++m) {
    const double psi2 = std::norm(psi_fourier_coeff(j, 0, m));
    const double var = scale * std::pow(static_cast<double>(m), alpha - 1.0);
    // +m and -m both contribute, except the Nyquist bin which is one real coefficient.
    gain += (m == half ? 1.0 : 2.0) * psi2 * var;
  }
  return gain;
}

double estimate_sigma_mad(std::span<const double> observation, double alpha) {
  require_grid(observation.size(), 16);
  const int big_j = grid_level(observation.size());
  const auto coeffs = forward_transform(observation, big_j - 1, big_j - 1);
  const auto d = coeffs.detail(big_j - 1);
  const double mad = median_absolute_deviation(std::vector<double>(d.begin(), d.end()));
  return mad / 0.6745 / std::sqrt(finest_level_noise_gain(observation.size(), alpha));
}

}  // namespace mwd

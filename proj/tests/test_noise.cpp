#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mwd/noise.hpp"

using namespace mwd;

namespace {

double sample_autocov(const std::vector<double>& x, std::size_t lag) {
  double s = 0.0;
  for (std::size_t t = 0; t + lag < x.size(); ++t) s += x[t] * x[t + lag];
  return s / static_cast<double>(x.size() - lag);
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  CHECK(derive_seed(1, {0}) != derive_seed(1, {0, 0}));
}

TEST_CASE("fGn autocovariance formula") {
  CHECK(fgn_autocovariance(0, 0.75) == doctest::Approx(1.0));
  CHECK(fgn_autocovariance(1, 0.75) == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)).epsilon(1e-14));
  CHECK(fgn_autocovariance(1, 0.75) == doctest::Approx(0.41421).epsilon(1e-5));
  CHECK(fgn_autocovariance(5, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("white fGn is uncorrelated and centered") {
  const std::size_t n = 4096;
  const auto x = fgn_increments(n, 0.5, 17);
  CHECK(std::abs(sample_autocov(x, 1)) < 4.0 / std::sqrt(n));
  CHECK(std::abs(mean_of(x)) < 4.0 / std::sqrt(n));
}

TEST_CASE("fGn sample mean is near zero for persistent noise") {
  const std::size_t n = 4096;
  for (double h : {0.7, 0.9}) {
    // Var(mean) = n^(2H-2) for fGn, so scale the tolerance accordingly.
    const double sd = std::pow(static_cast<double>(n), h - 1.0);
    const auto x = fgn_increments(n, h, 5);
    CHECK(std::abs(mean_of(x)) < 4.0 * sd);
  }
}

TEST_CASE("fGn autocovariance matches over replicates") {
  const std::size_t n = 1024, reps = 200;
  for (double h : {0.5, 0.7, 0.9}) {
    std::vector<std::vector<double>> acov(21);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto x = fgn_increments(n, h, derive_seed(99, {r}));
      // Centre with the known zero mean, not the sample mean.
      for (std::size_t k = 0; k <= 20; ++k) acov[k].push_back(sample_autocov(x, k));
    }
    for (std::size_t k = 0; k <= 20; ++k) {
      const double m = mean_of(acov[k]);
      double ss = 0.0;
      for (double v : acov[k]) ss += (v - m) * (v - m);
      const double se = std::sqrt(ss / (reps - 1) / reps);
      CHECK(std::abs(m - fgn_autocovariance(static_cast<long>(k), h)) < 5.0 * se);
    }
  }
}

TEST_CASE("FARIMA coefficients") {
  const auto c = farima_coefficients(0.25, 4);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == doctest::Approx(0.25));
  CHECK(c[2] == doctest::Approx(0.15625));
  // Gamma-ratio closed form as an independent check.
  const double d = 0.3;
  const auto c3 = farima_coefficients(d, 10);
  for (int k = 0; k < 10; ++k)
    CHECK(c3[k] == doctest::Approx(std::tgamma(k + d) / (std::tgamma(d) * std::tgamma(k + 1.0))).epsilon(1e-12));
  const auto c0 = farima_coefficients(0.0, 5);
  for (int k = 1; k < 5; ++k) CHECK(c0[k] == 0.0);
}

TEST_CASE("FARIMA series with d = 0 is standardized white noise") {
  const std::size_t n = 2048;
  const auto x = farima_series(n, 0.0, 8);
  double ss = 0.0;
  for (double v : x) ss += v * v;
  CHECK(ss / n == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(sample_autocov(x, 1)) < 4.0 / std::sqrt(n));
  CHECK_THROWS_AS(farima_series(n, 0.5, 1), NoiseError);
}

TEST_CASE("FARIMA log-periodogram slope near zero") {
  const std::size_t n = 16384, reps = 50;
  for (double d : {0.1, 0.25, 0.4}) {
    const std::size_t lo = 4, hi = 200;
    std::vector<double> avg(hi + 1, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto x = farima_series(n, d, derive_seed(7, {r}));
      const HalfSpectrum f = analyze(x);
      for (std::size_t m = lo; m <= hi; ++m) avg[m] += std::norm(f.bin(m)) / reps;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t m = lo; m <= hi; ++m) {
      const double lx = std::log(2.0 * std::sin(kPi * m / n)), ly = std::log(avg[m]);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; cnt += 1;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(std::abs(slope + 2.0 * d) < 0.1);
  }
}

TEST_CASE("spectral constants") {
  CHECK(spectral_constant(NoiseGenerator::kFarima, 1.0) == doctest::Approx(1.0));
  CHECK(spectral_constant(NoiseGenerator::kFgnCirculant, 1.0) == doctest::Approx(1.0));
  // Periodogram of a long fGn series at low frequencies against C |lambda|^(1 - 2H).
  const std::size_t n = 8192, reps = 100;
  const double alpha = 0.5, h = 1.0 - alpha / 2.0;
  double ratio = 0.0;
  int count = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto x = fgn_increments(n, h, derive_seed(2, {r}));
    const HalfSpectrum f = analyze(x);
    for (std::size_t m = 20; m < 60; ++m) {
      const double model = std::pow(static_cast<double>(n), -alpha) * std::pow(static_cast<double>(m), alpha - 1.0);
      ratio += std::norm(f.bin(m)) / model;
      ++count;
    }
  }
  CHECK(ratio / count == doctest::Approx(spectral_constant(NoiseGenerator::kFgnCirculant, alpha)).epsilon(0.05));
}

TEST_CASE("SNR calibration") {
  Signal unit(64, 1.0);
  CHECK(calibrate_sigma(unit, 20.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(calibrate_sigma(unit, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  Signal g = {0.3, -1.2, 2.0, 0.7};
  const double s = calibrate_sigma(g, 13.5);
  CHECK(std::abs(snr_db(g, s) - 13.5) < 1e-12);
  CHECK(calibrate_sigma(g, INFINITY) == 0.0);
}

TEST_CASE("MAD sigma estimate") {
  const std::size_t n = 4096;
  std::vector<double> ratios;
  for (std::uint64_t r = 0; r < 100; ++r) {
    std::mt19937_64 rng(derive_seed(31, {r}));
    std::normal_distribution<double> z(0.0, 0.3);
    std::vector<double> y(n);
    for (double& v : y) v = z(rng);
    ratios.push_back(estimate_sigma_mad(y) / 0.3);
  }
  std::nth_element(ratios.begin(), ratios.begin() + 50, ratios.end());
  CHECK(std::abs(ratios[50] - 1.0) < 0.1);

  CHECK(estimate_sigma_mad(std::vector<double>(256, 0.0)) == 0.0);
  std::vector<double> y(256);
  std::mt19937 rng(1);
  std::normal_distribution<double> z;
  for (double& v : y) v = z(rng);
  std::vector<double> scaled = y;
  for (double& v : scaled) v *= -2.5;
  CHECK(estimate_sigma_mad(scaled) == doctest::Approx(2.5 * estimate_sigma_mad(y)).epsilon(1e-12));
  CHECK_THROWS(estimate_sigma_mad(std::vector<double>(8, 1.0)));
}

TEST_CASE("median absolute deviation") {
  CHECK(median_absolute_deviation({1.0, 2.0, 3.0, 4.0, 100.0}) == doctest::Approx(1.0));
  CHECK(median_absolute_deviation({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(1.0));
}

TEST_CASE("LRD spec validation") {
  CHECK_THROWS_AS((LrdSpec{0.0, 1.0, NoiseGenerator::kFarima}.validate()), NoiseError);
  CHECK_THROWS_AS((LrdSpec{1.2, 1.0, NoiseGenerator::kFarima}.validate()), NoiseError);
  CHECK_NOTHROW((LrdSpec{0.4, 1.0, NoiseGenerator::kFgnCirculant}.validate()));
  const LrdSpec s{0.6, 1.0, NoiseGenerator::kFarima};
  CHECK(s.hurst() == doctest::Approx(0.7));
  CHECK(s.farima_d() == doctest::Approx(0.2));
}

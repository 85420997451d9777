#include <cmath>
#include <random>

#include "doctest.h"
#include "mwd/kernels.hpp"
#include "mwd/reference.hpp"

using namespace mwd;

TEST_CASE("multiplier values") {
  const auto box = KernelSpec::boxcar(0.5);
  CHECK(fourier_multiplier(box, 1).real() == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(fourier_multiplier(box, 0).real() == 1.0);
  CHECK(fourier_multiplier(KernelSpec::regular_smooth(0.5), 3).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fourier_multiplier(KernelSpec::direct(), 99).real() == 1.0);
  const auto ss = KernelSpec::super_smooth(0.5, 1.0, 1.0);
  CHECK(fourier_multiplier(ss, 3).real() == doctest::Approx(0.5 * std::exp(-3.0)).epsilon(1e-14));
}

TEST_CASE("multipliers are real and even") {
  for (const auto& k : {KernelSpec::boxcar(0.3), KernelSpec::regular_smooth(0.7), KernelSpec::super_smooth(0.2, 0.5, 1.5)})
    for (long m = 1; m < 40; ++m) {
      CHECK(fourier_multiplier(k, m).imag() == 0.0);
      CHECK(fourier_multiplier(k, -m) == std::conj(fourier_multiplier(k, m)));
    }
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(KernelSpec::regular_smooth(0.0).validate(), KernelError);
  CHECK_THROWS_AS(KernelSpec::super_smooth(0.5, 0.0, 1.0).validate(), KernelError);
  CHECK_THROWS_AS(KernelSpec::boxcar(-1.0).validate(), KernelError);
  KernelSpec bad = KernelSpec::regular_smooth(0.5);
  bad.theta = 1.0;
  CHECK_THROWS_AS(bad.validate(), KernelError);
  CHECK_NOTHROW(KernelSpec::super_smooth(-0.5, 1.0, 1.0).validate());
  CHECK(kernel_family_from_string("boxcar") == KernelFamily::kBoxcar);
  CHECK_THROWS_AS(kernel_family_from_string("gauss"), KernelError);
}

TEST_CASE("convolution matches time-domain circular convolution") {
  std::mt19937 rng(4);
  std::normal_distribution<double> z;
  for (std::size_t n : {16u, 128u, 512u}) {
    Signal x(n);
    for (double& v : x) v = z(rng);
    for (const auto& k : {KernelSpec::direct(), KernelSpec::regular_smooth(0.6), KernelSpec::super_smooth(0.3, 0.05, 1.0),
                          KernelSpec::boxcar(default_boxcar_width(0))}) {
      const Signal fast = convolve(x, k);
      const Signal slow = reference::circular_convolve(x, k);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-9);
    }
  }
}

TEST_CASE("direct kernel is the identity and constants pass unchanged") {
  const Signal x = {1.0, -2.0, 3.0, 0.5, 0.0, 4.0, -1.0, 2.0};
  const Signal y = convolve(x, KernelSpec::direct());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));
  const Signal c(32, 2.5);
  for (const auto& k : {KernelSpec::boxcar(0.37), KernelSpec::regular_smooth(1.0)})
    for (double v : convolve(c, k)) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("box-car blur is a moving average of the trigonometric interpolant") {
  // Oracle: (1/c) integral over [t - c/2, t + c/2] of the interpolant, by composite Simpson.
  const std::size_t n = 64;
  const double c = 1.0 / 8.0;
  Signal x(n, 0.0);
  for (std::size_t i = 20; i < 30; ++i) x[i] = 1.0;
  const HalfSpectrum spec = analyze(x);
  auto interp = [&](double t) {
    double v = spec.bin(0).real();
    for (long m = 1; m <= 32; ++m) {
      const double w = m == 32 ? 1.0 : 2.0;
      v += w * (spec.bin(static_cast<std::size_t>(m)) * std::polar(1.0, 2.0 * kPi * m * t)).real();
    }
    return v;
  };
  const Signal blurred = convolve(x, KernelSpec::boxcar(c));
  for (std::size_t i = 0; i < n; i += 5) {
    const double t = static_cast<double>(i) / n;
    const int steps = 2000;
    const double h = c / steps;
    double s = interp(t - c / 2) + interp(t + c / 2);
    for (int q = 1; q < steps; ++q) s += (q % 2 ? 4.0 : 2.0) * interp(t - c / 2 + q * h);
    CHECK(blurred[i] == doctest::Approx(s * h / 3.0 / c).epsilon(1e-9));
  }
}

TEST_CASE("box-car sandwich bounds") {
  const double c = (std::sqrt(5.0) - 1.0) / 2.0;
  for (long m = 1; m <= 512; ++m) {
    const auto [lo, hi] = boxcar_coeff_bounds(m, c);
    const double g = std::abs(fourier_multiplier(KernelSpec::boxcar(c), m).real());
    CHECK(lo <= g + 1e-15);
    CHECK(g <= hi + 1e-15);
  }
  const auto [lo, hi] = boxcar_coeff_bounds(1, 0.5);
  CHECK(lo == doctest::Approx(2.0 / kPi));
  CHECK(hi == doctest::Approx(1.0));
  const auto [l2, h2] = boxcar_coeff_bounds(4, 0.5);
  CHECK(l2 == 0.0);
  CHECK(h2 == 0.0);
  CHECK(std::abs(fourier_multiplier(KernelSpec::boxcar(0.5), 4).real()) < 1e-15);
  CHECK_THROWS(boxcar_coeff_bounds(0, 0.5));
}

TEST_CASE("default box-car widths") {
  CHECK(default_boxcar_width(0) == doctest::Approx(0.6180339887498949));
  CHECK(default_boxcar_width(1) == doctest::Approx(0.41421356237309515));
  CHECK(default_boxcar_width(2) == doctest::Approx(0.7320508075688772));
}

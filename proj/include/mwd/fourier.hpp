#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mwd {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Real samples of a periodic signal on the grid t_i = i/n, i = 0..n-1.
using Signal = std::vector<double>;

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_power_of_two(std::size_t n);

/// log2(n) for a power of two; throws GridError otherwise.
int grid_level(std::size_t n);

/// Throws GridError unless n is a power of two with n >= min_n.
void require_grid(std::size_t n, std::size_t min_n = 2);

/// Discrete L2[0,1] norm: sqrt(n^-1 sum x_i^2).
double grid_norm(std::span<const double> x);

/// Fourier coefficients f_m of a real grid signal, stored for m = 0..n/2.
///
/// f_m = n^-1 sum_i x_i exp(-2 pi i m i / n). Negative frequencies follow from
/// conjugate symmetry. The Nyquist bin is shared equally between m = n/2 and
/// m = -n/2 so that at() describes the real trigonometric interpolant.
class HalfSpectrum {
 public:
  HalfSpectrum() = default;
  explicit HalfSpectrum(std::size_t n);

  std::size_t grid_size() const { return n_; }
  long max_frequency() const { return static_cast<long>(n_ / 2); }

  /// Coefficient at signed frequency m; zero for |m| > n/2.
  complex at(long m) const;

  /// Raw bin for 0 <= m <= n/2 (Nyquist bin unsplit).
  complex& bin(std::size_t m) { return bins_[m]; }
  const complex& bin(std::size_t m) const { return bins_[m]; }
  std::span<complex> bins() { return bins_; }
  std::span<const complex> bins() const { return bins_; }

 private:
  std::size_t n_ = 0;
  std::vector<complex> bins_;
};

/// Forward transform of grid samples, normalized by 1/n.
HalfSpectrum analyze(std::span<const double> samples);

/// Inverse of analyze(): x_i = sum_m f_m exp(2 pi i m i / n).
Signal synthesize(const HalfSpectrum& spectrum);

namespace fft {

/// In-place unnormalized complex DFT, exp(-2 pi i jk/N) for sign = -1.
void complex_dft(std::span<complex> data, int sign);

/// Unnormalized real-to-half-complex DFT; out.size() == in.size()/2 + 1.
void real_forward(std::span<const double> in, std::span<complex> out);

/// Unnormalized half-complex-to-real DFT; out.size() == 2*(in.size()-1).
void real_backward(std::span<const complex> in, std::span<double> out);

}  // namespace fft

}  // namespace mwd

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mwd/fourier.hpp"

namespace mwd {

/// Degree-7 Meyer auxiliary polynomial x^4 (35 - 84x + 70x^2 - 20x^3),
/// clamped to 0 below 0 and to 1 above 1. Satisfies nu(x) + nu(1-x) = 1.
double nu_poly(double x);

/// Fourier transform of the mother Meyer wavelet, with phase exp(i pi xi).
/// Supported on 1/3 <= |xi| <= 4/3.
complex psi_hat(double xi);

/// Fourier transform of the Meyer scaling function: 1 on |xi| <= 1/3,
/// cos(pi/2 nu(3|xi| - 1)) up to |xi| = 2/3, zero beyond.
double phi_hat(double xi);

/// The integer frequencies carrying level-j periodized Meyer wavelets:
/// +-{ceil(2^j/3), ..., floor(2^(j+2)/3)}.
struct FrequencySet {
  int level = 0;
  std::vector<long> members;  // ascending

  long min_positive() const;
  long max_positive() const;
  bool contains(long m) const;
  std::size_t size() const { return members.size(); }
};

FrequencySet cj_domain(int j);

/// Smallest and largest positive frequency of C_j.
long cj_low(int j);
long cj_high(int j);

/// Largest |m| with a nonzero scaling-function coefficient at level j.
long scaling_high(int j);

/// Psi^{j,k}_m = <Psi_{j,k}, e_m> = 2^(-j/2) exp(-2 pi i m k 2^-j) psi_hat(m 2^-j).
complex psi_fourier_coeff(int j, long k, long m);

/// Phi^{j,k}_m = 2^(-j/2) exp(-2 pi i m k 2^-j) phi_hat(m 2^-j).
complex phi_fourier_coeff(int j, long k, long m);

/// Scaling coefficients at level j0 and detail coefficients for j0 <= j <= j1.
class WaveletCoeffs {
 public:
  WaveletCoeffs() = default;
  WaveletCoeffs(int j0, int j1);

  int coarse_level() const { return j0_; }
  int fine_level() const { return j1_; }

  std::span<double> scaling() { return scaling_; }
  std::span<const double> scaling() const { return scaling_; }

  /// Detail coefficients b_{j,k}, k = 0..2^j - 1.
  std::span<double> detail(int j);
  std::span<const double> detail(int j) const;

  std::size_t detail_count() const;
  bool all_finite() const;

  /// Sum of squares of every coefficient.
  double energy() const;

  WaveletCoeffs& operator+=(const WaveletCoeffs& other);
  WaveletCoeffs& operator*=(double s);

 private:
  void check_level(int j) const;

  int j0_ = 0;
  int j1_ = -1;
  std::vector<double> scaling_;
  std::vector<std::vector<double>> details_;
};

class TransformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cached psi_hat / phi_hat tables per level. Immutable after construction,
/// so one instance can be shared across threads.
class MeyerBasis {
 public:
  explicit MeyerBasis(int max_level = 16);

  int max_level() const { return max_level_; }

  /// psi_hat(m 2^-j) for m = 0..cj_high(j).
  std::span<const complex> psi_table(int j) const;
  /// phi_hat(m 2^-j) for m = 0..scaling_high(j).
  std::span<const double> phi_table(int j) const;

  complex psi(int j, long m) const;
  double phi(int j, long m) const;

  /// Shared basis covering levels 0..16.
  static const MeyerBasis& standard();

 private:
  void check_level(int j) const;

  int max_level_;
  std::vector<std::vector<complex>> psi_;
  std::vector<std::vector<double>> phi_;
};

/// Wavelet analysis of a half spectrum: b_{j,k} = sum_m f_m conj(Psi^{j,k}_m).
/// Requires j0 <= j1 < log2(n).
WaveletCoeffs analyze_spectrum(const HalfSpectrum& spectrum, int j0, int j1,
                               const MeyerBasis& basis = MeyerBasis::standard());

/// Fourier coefficients of sum a Phi + sum b Psi on an n-point grid.
/// Requires 2^(j1+2)/3 < n/2 so no frequency aliases.
HalfSpectrum synthesize_spectrum(const WaveletCoeffs& coeffs, std::size_t n,
                                 const MeyerBasis& basis = MeyerBasis::standard());

WaveletCoeffs forward_transform(std::span<const double> signal, int j0, int j1,
                                const MeyerBasis& basis = MeyerBasis::standard());

Signal inverse_transform(const WaveletCoeffs& coeffs, std::size_t n,
                         const MeyerBasis& basis = MeyerBasis::standard());

/// Dense complex matrix, row-major.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<complex> data;

  complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// M_{m,m'} = sum_{j'} 1{2^j' | (m - m')} psi_hat(m 2^-j') conj(psi_hat(m' 2^-j'))
/// over the contributing scales j-1, j, j+1, indexed by cj_domain(j).members.
/// This matrix is the identity.
ComplexMatrix covariance_matrix_check(int j);

/// sum_{k=0}^{2^j-1} exp(2 pi i omega k 2^-j), which equals 2^j 1{2^j | omega}.
complex dyadic_exponential_sum(long omega, int j);

}  // namespace mwd

#include "mwd/meyer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mwd {

namespace {

std::size_t residue(long m, long modulus) {
  long r = m % modulus;
  if (r < 0) r += modulus;
  return static_cast<std::size_t>(r);
}

complex unit_phase(long m, long k, int j) {
  // exp(-2 pi i m k / 2^j), reduced modulo 2^j to keep the angle small.
  const long period = 1L << j;
  const double frac = static_cast<double>(residue(m * k, period)) / static_cast<double>(period);
  return std::polar(1.0, -2.0 * kPi * frac);
}

}  // namespace

double nu_poly(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x2 = x * x;
  return x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}

complex psi_hat(double xi) {
  const double a = std::abs(xi);
  if (a < 1.0 / 3.0 || a > 4.0 / 3.0) return {};
  const double window = a <= 2.0 / 3.0 ? std::sin(0.5 * kPi * nu_poly(3.0 * a - 1.0))
                                       : std::cos(0.5 * kPi * nu_poly(1.5 * a - 1.0));
  return std::polar(window, kPi * xi);
}

double phi_hat(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0 / 3.0) return 1.0;
  if (a >= 2.0 / 3.0) return 0.0;
  return std::cos(0.5 * kPi * nu_poly(3.0 * a - 1.0));
}

long cj_low(int j) {
  if (j < 0) throw std::invalid_argument("cj_domain: negative level " + std::to_string(j));
  const long p = 1L << j;
  return (p + 2) / 3;  // ceil(2^j / 3)
}

long cj_high(int j) {
  if (j < 0) throw std::invalid_argument("cj_domain: negative level " + std::to_string(j));
  return (1L << (j + 2)) / 3;  // floor(2^(j+2) / 3)
}

long scaling_high(int j) {
  if (j < 0) throw std::invalid_argument("scaling_high: negative level " + std::to_string(j));
  // phi_hat(m 2^-j) vanishes from |m| = 2^(j+1)/3 on, which is never an integer.
  return (1L << (j + 1)) / 3;
}

long FrequencySet::min_positive() const { return members.empty() ? 0 : members[members.size() / 2]; }
long FrequencySet::max_positive() const { return members.empty() ? 0 : members.back(); }
bool FrequencySet::contains(long m) const { return std::binary_search(members.begin(), members.end(), m); }

FrequencySet cj_domain(int j) {
  const long lo = cj_low(j);
  const long hi = cj_high(j);
  FrequencySet set;
  set.level = j;
  set.members.reserve(static_cast<std::size_t>(2 * (hi - lo + 1)));
  for (long m = hi; m >= lo; --m) set.members.push_back(-m);
  for (long m = lo; m <= hi; ++m) set.members.push_back(m);
  return set;
}

complex psi_fourier_coeff(int j, long k, long m) {
  const complex value = psi_hat(std::ldexp(static_cast<double>(m), -j));
  if (value == complex{}) return {};
  return std::pow(2.0, -0.5 * j) * unit_phase(m, k, j) * value;
}

complex phi_fourier_coeff(int j, long k, long m) {
  const double value = phi_hat(std::ldexp(static_cast<double>(m), -j));
  if (value == 0.0) return {};
  return std::pow(2.0, -0.5 * j) * unit_phase(m, k, j) * value;
}

// ---------------------------------------------------------------------------

WaveletCoeffs::WaveletCoeffs(int j0, int j1) : j0_(j0), j1_(j1) {
  if (j0 < 0) throw TransformError("coarse level must be nonnegative");
  if (j1 < j0 - 1) throw TransformError("fine level below coarse level");
  scaling_.assign(std::size_t{1} << j0, 0.0);
  for (int j = j0; j <= j1; ++j) details_.emplace_back(std::size_t{1} << j, 0.0);
}

void WaveletCoeffs::check_level(int j) const {
  if (j < j0_ || j > j1_) throw std::out_of_range("detail level " + std::to_string(j) + " outside [" +
                                                  std::to_string(j0_) + ", " + std::to_string(j1_) + "]");
}

std::span<double> WaveletCoeffs::detail(int j) {
  check_level(j);
  return details_[static_cast<std::size_t>(j - j0_)];
}

std::span<const double> WaveletCoeffs::detail(int j) const {
  check_level(j);
  return details_[static_cast<std::size_t>(j - j0_)];
}

std::size_t WaveletCoeffs::detail_count() const {
  std::size_t total = 0;
  for (const auto& d : details_) total += d.size();
  return total;
}

bool WaveletCoeffs::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(scaling_.begin(), scaling_.end(), finite)) return false;
  for (const auto& d : details_)
    if (!std::all_of(d.begin(), d.end(), finite)) return false;
  return true;
}

double WaveletCoeffs::energy() const {
  double e = 0.0;
  for (double v : scaling_) e += v * v;
  for (const auto& d : details_)
    for (double v : d) e += v * v;
  return e;
}

WaveletCoeffs& WaveletCoeffs::operator+=(const WaveletCoeffs& other) {
  if (other.j0_ != j0_ || other.j1_ != j1_) throw TransformError("coefficient level ranges differ");
  for (std::size_t i = 0; i < scaling_.size(); ++i) scaling_[i] += other.scaling_[i];
  for (std::size_t l = 0; l < details_.size(); ++l)
    for (std::size_t i = 0; i < details_[l].size(); ++i) details_[l][i] += other.details_[l][i];
  return *this;
}

WaveletCoeffs& WaveletCoeffs::operator*=(double s) {
  for (double& v : scaling_) v *= s;
  for (auto& d : details_)
    for (double& v : d) v *= s;
  return *this;
}

// ---------------------------------------------------------------------------

MeyerBasis::MeyerBasis(int max_level) : max_level_(max_level) {
  if (max_level < 0 || max_level > 24) throw std::invalid_argument("MeyerBasis: max level out of range");
  psi_.resize(static_cast<std::size_t>(max_level) + 1);
  phi_.resize(static_cast<std::size_t>(max_level) + 1);
  for (int j = 0; j <= max_level; ++j) {
    auto& p = psi_[static_cast<std::size_t>(j)];
    p.resize(static_cast<std::size_t>(cj_high(j)) + 1);
    for (std::size_t m = 0; m < p.size(); ++m) p[m] = psi_hat(std::ldexp(static_cast<double>(m), -j));
    auto& s = phi_[static_cast<std::size_t>(j)];
    s.resize(static_cast<std::size_t>(scaling_high(j)) + 1);
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = phi_hat(std::ldexp(static_cast<double>(m), -j));
  }
}

void MeyerBasis::check_level(int j) const {
  if (j < 0 || j > max_level_)
    throw std::out_of_range("MeyerBasis: level " + std::to_string(j) + " not tabulated");
}

std::span<const complex> MeyerBasis::psi_table(int j) const {
  check_level(j);
  return psi_[static_cast<std::size_t>(j)];
}

std::span<const double> MeyerBasis::phi_table(int j) const {
  check_level(j);
  return phi_[static_cast<std::size_t>(j)];
}

complex MeyerBasis::psi(int j, long m) const {
  auto table = psi_table(j);
  const long a = m < 0 ? -m : m;
  if (a >= static_cast<long>(table.size())) return {};
  const complex v = table[static_cast<std::size_t>(a)];
  return m < 0 ? std::conj(v) : v;
}

double MeyerBasis::phi(int j, long m) const {
  auto table = phi_table(j);
  const long a = m < 0 ? -m : m;
  if (a >= static_cast<long>(table.size())) return 0.0;
  return table[static_cast<std::size_t>(a)];
}

const MeyerBasis& MeyerBasis::standard() {
  static const MeyerBasis basis(16);
  return basis;
}

// ---------------------------------------------------------------------------

namespace {

void check_analysis_levels(std::size_t n, int j0, int j1, const MeyerBasis& basis) {
  const int big_j = grid_level(n);
  if (j0 < 0) throw TransformError("coarse level must be nonnegative");
  if (j0 >= big_j) throw TransformError("coarse level must be below log2(n)");
  if (j1 >= big_j)
    throw TransformError("fine level " + std::to_string(j1) + " must be below log2(n) = " + std::to_string(big_j));
  if (j1 < j0 - 1) throw TransformError("fine level below coarse level");
  if (std::max(j0, j1) > basis.max_level()) throw TransformError("level exceeds the tabulated Meyer basis");
}

// Inverse-DFT the residue-folded sums: out_k = 2^(-j/2) Re sum_r acc_r exp(2 pi i r k / 2^j).
void fold_to_coefficients(std::vector<complex>& acc, int j, std::span<double> out) {
  fft::complex_dft(acc, +1);
  const double scale = std::pow(2.0, -0.5 * j);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = scale * acc[k].real();
}

}  // namespace

WaveletCoeffs analyze_spectrum(const HalfSpectrum& spectrum, int j0, int j1, const MeyerBasis& basis) {
  const std::size_t n = spectrum.grid_size();
  check_analysis_levels(n, j0, j1, basis);
  WaveletCoeffs out(j0, j1);

  {
    const long period = 1L << j0;
    std::vector<complex> acc(static_cast<std::size_t>(period));
    const long hi = scaling_high(j0);
    for (long m = -hi; m <= hi; ++m) acc[residue(m, period)] += spectrum.at(m) * basis.phi(j0, m);
    fold_to_coefficients(acc, j0, out.scaling());
  }

#pragma omp parallel for schedule(dynamic)
  for (int j = j0; j <= j1; ++j) {
    const long period = 1L << j;
    std::vector<complex> acc(static_cast<std::size_t>(period));
    const long lo = cj_low(j);
    const long hi = std::min(cj_high(j), spectrum.max_frequency());
    for (long m = lo; m <= hi; ++m) {
      const complex w = basis.psi(j, m);
      acc[residue(m, period)] += spectrum.at(m) * std::conj(w);
      acc[residue(-m, period)] += spectrum.at(-m) * w;
    }
    fold_to_coefficients(acc, j, out.detail(j));
  }
  return out;
}

HalfSpectrum synthesize_spectrum(const WaveletCoeffs& coeffs, std::size_t n, const MeyerBasis& basis) {
  HalfSpectrum out(n);
  const long half = out.max_frequency();
  const int j0 = coeffs.coarse_level();
  const int j1 = coeffs.fine_level();
  if (std::max(j0, j1) > basis.max_level()) throw TransformError("level exceeds the tabulated Meyer basis");
  if (scaling_high(j0) >= half || (j1 >= j0 && cj_high(j1) >= half))
    throw TransformError("levels up to " + std::to_string(std::max(j0, j1)) + " alias on a grid of " +
                         std::to_string(n) + " points; need 2^(j1+2)/3 < n/2");

  auto accumulate = [&](std::span<const double> c, int j, auto window, long hi) {
    const long period = 1L << j;
    std::vector<complex> dft(c.begin(), c.end());
    fft::complex_dft(dft, -1);
    const double scale = std::pow(2.0, -0.5 * j);
    for (long m = 0; m <= hi; ++m) out.bin(static_cast<std::size_t>(m)) += scale * window(m) * dft[residue(m, period)];
  };

  accumulate(coeffs.scaling(), j0, [&](long m) { return complex(basis.phi(j0, m)); }, scaling_high(j0));
  for (int j = j0; j <= j1; ++j)
    accumulate(coeffs.detail(j), j, [&, j](long m) { return basis.psi(j, m); }, cj_high(j));
  return out;
}

WaveletCoeffs forward_transform(std::span<const double> signal, int j0, int j1, const MeyerBasis& basis) {
  require_grid(signal.size());
  return analyze_spectrum(analyze(signal), j0, j1, basis);
}

Signal inverse_transform(const WaveletCoeffs& coeffs, std::size_t n, const MeyerBasis& basis) {
  require_grid(n);
  return synthesize(synthesize_spectrum(coeffs, n, basis));
}

ComplexMatrix covariance_matrix_check(int j) {
  const FrequencySet domain = cj_domain(j);
  const std::size_t size = domain.size();
  ComplexMatrix mat{size, size, std::vector<complex>(size * size)};
  for (std::size_t r = 0; r < size; ++r) {
    const long m = domain.members[r];
    for (std::size_t c = 0; c < size; ++c) {
      const long mp = domain.members[c];
      complex total;
      for (int scale = std::max(0, j - 1); scale <= j + 1; ++scale) {
        const long period = 1L << scale;
        if ((m - mp) % period != 0) continue;
        total += psi_hat(std::ldexp(static_cast<double>(m), -scale)) *
                 std::conj(psi_hat(std::ldexp(static_cast<double>(mp), -scale)));
      }
      mat(r, c) = total;
    }
  }
  return mat;
}

complex dyadic_exponential_sum(long omega, int j) {
  if (j < 0) throw std::invalid_argument("dyadic_exponential_sum: negative level");
  const long period = 1L << j;
  complex total;
  for (long k = 0; k < period; ++k) {
    const double frac = static_cast<double>(residue(omega * k, period)) / static_cast<double>(period);
    total += std::polar(1.0, 2.0 * kPi * frac);
  }
  return total;
}

}  // namespace mwd

#include "mwd/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

namespace mwd {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per (kind, size) under a lock and never destroyed.
enum class PlanKind { kForward, kBackward, kR2C, kC2R };

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan(PlanKind kind, int n) {
  static std::map<std::tuple<int, int>, fftw_plan> plans;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_tuple(static_cast<int>(kind), n);
  if (auto it = plans.find(key); it != plans.end()) return it->second;

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (kind) {
    case PlanKind::kForward:
    case PlanKind::kBackward: {
      auto* buf = fftw_alloc_complex(n);
      plan = fftw_plan_dft_1d(n, buf, buf, kind == PlanKind::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                              flags);
      fftw_free(buf);
      break;
    }
    case PlanKind::kR2C: {
      auto* in = fftw_alloc_real(n);
      auto* out = fftw_alloc_complex(n / 2 + 1);
      plan = fftw_plan_dft_r2c_1d(n, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
    case PlanKind::kC2R: {
      auto* in = fftw_alloc_complex(n / 2 + 1);
      auto* out = fftw_alloc_real(n);
      plan = fftw_plan_dft_c2r_1d(n, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
  }
  if (plan == nullptr) throw std::runtime_error("fftw: failed to create plan");
  plans.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int grid_level(std::size_t n) {
  if (!is_power_of_two(n)) throw GridError("grid size " + std::to_string(n) + " is not a power of two");
  int level = 0;
  while ((std::size_t{1} << level) < n) ++level;
  return level;
}

void require_grid(std::size_t n, std::size_t min_n) {
  if (!is_power_of_two(n)) throw GridError("grid size " + std::to_string(n) + " is not a power of two");
  if (n < min_n) throw GridError("grid size " + std::to_string(n) + " is below the minimum " + std::to_string(min_n));
}

double grid_norm(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += v * v;
  return std::sqrt(ss / static_cast<double>(x.size()));
}

HalfSpectrum::HalfSpectrum(std::size_t n) : n_(n), bins_(n / 2 + 1) { require_grid(n); }

complex HalfSpectrum::at(long m) const {
  const long half = max_frequency();
  const long a = m < 0 ? -m : m;
  if (a > half) return {};
  complex v = bins_[static_cast<std::size_t>(a)];
  if (a == half) return 0.5 * v;
  return m < 0 ? std::conj(v) : v;
}

HalfSpectrum analyze(std::span<const double> samples) {
  HalfSpectrum out(samples.size());
  fft::real_forward(samples, out.bins());
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out.bins()) c *= scale;
  return out;
}

Signal synthesize(const HalfSpectrum& spectrum) {
  Signal out(spectrum.grid_size());
  fft::real_backward(spectrum.bins(), out);
  return out;
}

namespace fft {

void complex_dft(std::span<complex> data, int sign) {
  const int n = static_cast<int>(data.size());
  if (n <= 1) return;
  auto plan = cached_plan(sign < 0 ? PlanKind::kForward : PlanKind::kBackward, n);
  fftw_execute_dft(plan, as_fftw(data.data()), as_fftw(data.data()));
}

void real_forward(std::span<const double> in, std::span<complex> out) {
  const int n = static_cast<int>(in.size());
  if (out.size() != in.size() / 2 + 1) throw std::invalid_argument("real_forward: output size mismatch");
  // r2c leaves its input untouched; the cast only satisfies FFTW's signature.
  auto plan = cached_plan(PlanKind::kR2C, n);
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void real_backward(std::span<const complex> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  if (in.size() != out.size() / 2 + 1) throw std::invalid_argument("real_backward: input size mismatch");
  // c2r destroys its input, so work on a copy.
  std::vector<complex> scratch(in.begin(), in.end());
  auto plan = cached_plan(PlanKind::kC2R, n);
  fftw_execute_dft_c2r(plan, as_fftw(scratch.data()), out.data());
}

}  // namespace fft

}  // namespace mwd

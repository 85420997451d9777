// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mwd/bench.hpp"
#include "mwd/estimator.hpp"
#include "mwd/meyer.hpp"

using namespace mwd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class... T>
std::string fmtn(const char* f, T... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// 1. Covariance matrix of the coefficient noise is the identity.
Outcome covariance_identity() {
  double worst = 0.0;
  for (int j = 2; j <= 9; ++j) {
    const ComplexMatrix m = covariance_matrix_check(j);
    for (std::size_t r = 0; r < m.rows; ++r)
      for (std::size_t c = 0; c < m.cols; ++c) worst = std::max(worst, std::abs(m(r, c) - (r == c ? 1.0 : 0.0)));
  }
  return {worst <= 1e-10, fmt("max entrywise deviation %.3g (tol 1e-10), j = 2..9", worst)};
}

// 2. Dyadic exponential sums.
Outcome dyadic_sums() {
  double worst = 0.0;
  for (int j = 0; j <= 8; ++j) {
    const long top = 1L << (j + 2);
    for (long w = -top; w <= top; ++w) {
      const double expect = w % (1L << j) == 0 ? std::ldexp(1.0, j) : 0.0;
      worst = std::max(worst, std::abs(dyadic_exponential_sum(w, j) - expect));
    }
  }
  return {worst <= 1e-9, fmt("max deviation %.3g (tol 1e-9), |w| <= 2^(j+2), j <= 8", worst)};
}

// 3. Round trip on the four test signals, orthonormality for j <= 6.
Outcome transform_fidelity() {
  const std::size_t n = 4096;
  const int j1 = grid_level(n) - 2;
  double worst_rt = 0.0;
  for (const char* name : {"lidar", "doppler", "bumps", "blocks"}) {
    // Project onto the span of the basis, then transform there and back.
    const Signal p = inverse_transform(forward_transform(test_signal(name, n), 0, j1), n);
    const Signal back = inverse_transform(forward_transform(p, 0, j1), n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += (back[i] - p[i]) * (back[i] - p[i]);
      den += p[i] * p[i];
    }
    worst_rt = std::max(worst_rt, std::sqrt(num / den));
  }
  double worst_on = 0.0;
  for (int ja = 0; ja <= 6; ++ja)
    for (int jb = ja; jb <= std::min(ja + 1, 6); ++jb)
      for (long ka = 0; ka < (1L << ja); ++ka)
        for (long kb = 0; kb < (1L << jb); ++kb) {
          complex ip = 0.0;
          const long top = cj_high(jb);
          for (long m = -top; m <= top; ++m)
            ip += psi_fourier_coeff(ja, ka, m) * std::conj(psi_fourier_coeff(jb, kb, m));
          worst_on = std::max(worst_on, std::abs(ip - (ja == jb && ka == kb ? 1.0 : 0.0)));
        }
  return {worst_rt < 1e-8 && worst_on <= 1e-9,
          fmtn("round-trip rel err %.3g (tol 1e-8, n = 4096, 4 signals); orthonormality dev %.3g (tol 1e-9)",
               worst_rt, worst_on)};
}

struct VarianceConfig {
  std::string label;
  std::vector<ChannelSpec> channels;
};

std::vector<VarianceConfig> variance_configs() {
  auto ch = [](KernelSpec k, double alpha) {
    return ChannelSpec{k, LrdSpec{alpha, 0.05, NoiseGenerator::kFgnCirculant}};
  };
  return {{"M=1 direct a=1", {ch(KernelSpec::direct(), 1.0)}},
          {"M=1 rs0.5 a=0.5", {ch(KernelSpec::regular_smooth(0.5), 0.5)}},
          {"M=2 rs0.5 a={1,0.5}", {ch(KernelSpec::regular_smooth(0.5), 1.0), ch(KernelSpec::regular_smooth(0.5), 0.5)}}};
}

// Monte-Carlo coefficient draws shared by criteria 4 and 5.
struct CoeffSamples {
  std::size_t n = 1024;
  int j1 = 8;
  std::size_t reps = 2000;
  WaveletCoeffs truth;
  std::vector<WaveletCoeffs> sum, sumsq;  // per config
  std::vector<std::vector<double>> sigma;  // spectral sigma per config
};

const CoeffSamples& coeff_samples() {
  static const CoeffSamples s = [] {
    CoeffSamples out;
    const Signal f = test_signal("doppler", out.n);
    out.truth = forward_transform(f, 0, out.j1);
    for (const auto& cfg : variance_configs()) {
      WaveletCoeffs sum(0, out.j1), sumsq(0, out.j1);
      std::vector<double> sigma;
      for (std::size_t r = 0; r < out.reps; ++r) {
        const auto obs = simulate(f, cfg.channels, NAN, derive_seed(2024, {r}));
        sigma = obs.spectral_sigma;
        auto est = estimate_wavelet_coeffs(obs, obs.spectral_sigma, 0, out.j1).coeffs;
        WaveletCoeffs dev = est;
        dev *= -1.0;
        dev += out.truth;  // truth - estimate
        sum += dev;
        for (int j = 0; j <= out.j1; ++j)
          for (double& v : dev.detail(j)) v *= v;
        for (double& v : dev.scaling()) v *= v;
        sumsq += dev;
      }
      out.sum.push_back(std::move(sum));
      out.sumsq.push_back(std::move(sumsq));
      out.sigma.push_back(sigma);
    }
    return out;
  }();
  return s;
}

// 4. Empirical coefficient variance against the closed form, pooled over k per level.
Outcome variance_oracle() {
  const auto& s = coeff_samples();
  const auto cfgs = variance_configs();
  const double reps = static_cast<double>(s.reps);
  double worst = 0.0;
  std::string where;
  for (std::size_t c = 0; c < cfgs.size(); ++c)
    for (int j = 4; j <= s.j1; ++j) {
      const double formula = coeff_variance(j, 0, cfgs[c].channels, s.sigma[c], s.n);
      double pooled = 0.0;
      const auto sum = s.sum[c].detail(j);
      const auto sq = s.sumsq[c].detail(j);
      for (std::size_t k = 0; k < sum.size(); ++k) {
        const double mean = sum[k] / reps;
        pooled += (sq[k] / reps - mean * mean) * reps / (reps - 1.0);
      }
      pooled /= static_cast<double>(sum.size());
      const double rel = std::abs(pooled / formula - 1.0);
      if (rel > worst) {
        worst = rel;
        where = cfgs[c].label + " j=" + std::to_string(j);
      }
    }
  const std::vector<ChannelSpec> unit = {ChannelSpec{KernelSpec::direct(), LrdSpec{1.0, 1.0, NoiseGenerator::kFarima}}};
  const std::vector<double> one = {1.0};
  double tau_dev = 0.0;
  for (int j = 0; j <= 10; ++j) tau_dev = std::max(tau_dev, std::abs(tau_j(j, unit, one, 4096, 1.0) - 1.0));
  return {worst <= 0.10 && tau_dev <= 1e-12,
          fmtn("worst pooled rel dev %.4f at %s (tol 0.10, 2000 reps, levels 4..8); |tau_j - 1| %.2g (tol 1e-12)",
               worst, where.c_str(), tau_dev)};
}

// 5. Unbiasedness at 50 random (j, k) per configuration.
Outcome unbiasedness() {
  const auto& s = coeff_samples();
  const auto cfgs = variance_configs();
  const double reps = static_cast<double>(s.reps);
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> level(0, s.j1);
  double worst = 0.0;
  std::size_t fails = 0, total = 0;
  for (std::size_t c = 0; c < cfgs.size(); ++c)
    for (int draw = 0; draw < 50; ++draw) {
      const int j = level(rng);
      std::uniform_int_distribution<long> pos(0, (1L << j) - 1);
      const auto k = static_cast<std::size_t>(pos(rng));
      const double mean = s.sum[c].detail(j)[k] / reps;
      const double var = (s.sumsq[c].detail(j)[k] / reps - mean * mean) * reps / (reps - 1.0);
      const double z = std::abs(mean) / std::sqrt(var / reps);
      worst = std::max(worst, z);
      ++total;
      if (z > 3.0) ++fails;
    }
  return {fails == 0, fmtn("max |mean error| / SE = %.2f over %zu coefficients (tol 3), %zu exceed", worst, total, fails)};
}

// 6. Reference table cell.
Outcome table_cell() {
  const std::size_t n = 4096;
  const Signal truth = test_signal("lidar", n);
  EstimatorConfig cfg;
  cfg.sigma_source = SigmaSource::kMadEstimated;
  CellOptions opt;
  opt.reps = 200;
  opt.snr_db = 20.0;
  const double target[] = {0.054, 0.045, 0.041};
  bool pass = true;
  std::string detail;
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto c = run_cell(truth, homogeneous_channels(m, 0.3, 1.0), cfg, opt);
    const bool ok = std::abs(c.rmse / target[m - 1] - 1.0) <= 0.30 && std::abs(c.mean_j1 - 7.0) <= 1.0;
    pass = pass && ok;
    detail += fmtn("M=%zu rmse %.4f (ref %.3f +-30%%) mean j1 %.2f (7 +- 1); ", m, c.rmse, target[m - 1], c.mean_j1);
  }
  return {pass, detail + "200 reps"};
}

// 7. Paired trend suite.
Outcome trend_suite() {
  ExperimentGrid g;
  g.signals = {"lidar", "doppler"};
  g.nus = {0.3, 0.5};
  g.alphas = {1.0, 0.6, 0.3};
  g.ms = {1, 2, 3};
  g.reps = 200;
  g.n = 4096;
  const auto result = run_grid(g);
  std::size_t errors = 0;
  for (const auto& c : result.cells) errors += !c.error.empty();
  const auto trends = check_trends(result);
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // passed, total
  std::string failed;
  for (const auto& t : trends) {
    auto& [p, n] = tally[t.name];
    ++n;
    if (t.passed) {
      ++p;
    } else if (failed.size() < 400) {
      failed += fmtn(" [%s %s nu=%.1f a=%.1f M=%zu: diff %.4f se %.4f]", t.name.c_str(), t.smaller.signal.c_str(),
                     t.smaller.nu, t.smaller.alpha, t.smaller.m, t.mean_diff, t.se);
    }
  }
  bool pass = errors == 0 && !trends.empty();
  std::string detail;
  for (const auto& [name, pt] : tally) {
    pass = pass && pt.first == pt.second;
    detail += fmtn("%s %zu/%zu; ", name.c_str(), pt.first, pt.second);
  }
  return {pass, detail + fmtn("one-sided 95%%, 200 paired reps, %zu cell errors", errors) + failed};
}

// 8. Rate slopes on Doppler.
Outcome rate_slopes() {
  EstimatorConfig cfg;
  CellOptions opt;
  opt.reps = 200;
  const std::vector<std::size_t> ns = {1024, 2048, 4096, 8192, 16384};
  bool pass = true;
  std::string detail;
  for (double nu : {0.0, 0.5}) {
    const auto s1 = rate_slope("doppler", homogeneous_channels(1, nu, 1.0), cfg, ns, opt);
    const auto s5 = rate_slope("doppler", homogeneous_channels(1, nu, 0.5), cfg, ns, opt);
    const double z = (s5.slope - s1.slope) / std::hypot(s1.se, s5.se);
    const bool ok = s1.slope < 0.0 && s5.slope < 0.0 && z > 1.645;
    pass = pass && ok;
    detail += fmtn("nu=%.1f: slope(a=1) %.3f+-%.3f, slope(a=0.5) %.3f+-%.3f, z %.1f; ", nu, s1.slope, s1.se, s5.slope,
                   s5.se, z);
  }
  return {pass, detail + "n = 2^10..2^14, 200 reps, need slopes < 0 and z > 1.645"};
}

// 9. Fine-scale and channel selectors.
Outcome selectors() {
  const std::size_t n = 4096;
  const Signal truth = test_signal("lidar", n);
  const auto channels = homogeneous_channels(1, 0.5, 1.0);
  EstimatorConfig cfg;
  CellOptions opt;
  opt.reps = 100;
  opt.seed = 9;
  const auto cell = run_cell(truth, channels, cfg, opt);
  std::map<int, int> counts;
  for (int j : cell.j1) ++counts[j];
  int mode = 0, best = -1;
  for (const auto& [j, c] : counts)
    if (c > best) {
      best = c;
      mode = j;
    }
  const auto rates = channel_rates(channels, std::vector<double>{1.0}, n, EstimatorMode::kRegularSmooth);
  const int theory = theoretical_j1(EstimatorMode::kRegularSmooth, rates, n);
  const bool ok_j1 = std::abs(mode - theory) <= 1;

  // Blurred noisier channel first, direct quieter channel second, so ties favour the wrong one.
  const std::vector<ChannelSpec> contrast = {
      ChannelSpec{KernelSpec::regular_smooth(0.5), LrdSpec{1.0, 0.1, NoiseGenerator::kFarima}},
      ChannelSpec{KernelSpec::direct(), LrdSpec{1.0, 0.05, NoiseGenerator::kFarima}}};
  std::size_t hits = 0;
  const std::size_t seeds = 100;
  for (std::size_t r = 0; r < seeds; ++r) {
    const std::uint64_t seed = derive_seed(10, {stream::kReplicate, r});
    const auto obs = simulate(truth, contrast, NAN, seed);
    const auto probes = probe_channels(obs, derive_seed(seed, {stream::kProbe}));
    const std::vector<double> alpha = {1.0, 1.0};
    hits += data_driven_best_channel(probes, alpha, obs.spectral_sigma, n) == 1;
  }
  const double rate = static_cast<double>(hits) / seeds;
  return {ok_j1 && rate >= 0.90,
          fmtn("j1 mode %d vs theoretical %d (tol 1, 100 seeds, lidar nu=0.5 a=1 20 dB); best channel hit rate %.2f "
               "(need >= 0.90)",
               mode, theory, rate)};
}

// 10. Super-smooth linear estimator.
Outcome super_smooth() {
  const std::vector<ChannelSpec> ch = {ChannelSpec{KernelSpec::super_smooth(0.0, 1.0, 1.0), LrdSpec{1.0, 1.0, NoiseGenerator::kFarima}}};
  EstimatorConfig cfg;
  cfg.mode = EstimatorMode::kSuperSmooth;
  CellOptions opt;
  opt.reps = 100;
  opt.snr_db = 20.0;
  opt.antithetic = true;
  std::vector<double> rmse;
  double naive_ratio = 0.0;
  std::string detail;
  for (std::size_t n = 1024; n <= 16384; n *= 2) {
    opt.with_naive = n == 4096;
    const auto c = run_cell(test_signal("smooth", n), ch, cfg, opt);
    rmse.push_back(c.rmse);
    detail += fmtn("n=%zu %.5f; ", n, c.rmse);
    if (n == 4096) naive_ratio = c.naive_rmse / c.rmse;
  }
  bool finite = true, decreasing = true;
  for (std::size_t i = 0; i < rmse.size(); ++i) {
    finite = finite && std::isfinite(rmse[i]);
    if (i > 0) decreasing = decreasing && rmse[i] < rmse[i - 1];
  }
  return {finite && decreasing && naive_ratio >= 2.0,
          detail + fmtn("naive/linear at 2^12 = %.3g (need >= 2); smooth signal, 100 antithetic reps", naive_ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"covariance identity", covariance_identity},
      {"dyadic exponential sums", dyadic_sums},
      {"transform fidelity", transform_fidelity},
      {"variance oracle", variance_oracle},
      {"unbiasedness", unbiasedness},
      {"table cell", table_cell},
      {"trend suite", trend_suite},
      {"rate slopes", rate_slopes},
      {"selectors", selectors},
      {"super-smooth linear estimator", super_smooth},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!chosen.empty() && !chosen.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}

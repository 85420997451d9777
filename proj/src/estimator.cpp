#include "mwd/estimator.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace mwd {

std::string_view to_string(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::kRegularSmooth: return "regular_smooth";
    case EstimatorMode::kSuperSmooth: return "super_smooth";
    case EstimatorMode::kBoxcar: return "boxcar";
  }
  return "unknown";
}

std::string_view to_string(SigmaSource source) {
  return source == SigmaSource::kKnown ? "known" : "mad_estimated";
}

std::string_view to_string(ScaleRule rule) { return rule == ScaleRule::kDataDriven ? "data_driven" : "theoretical"; }

std::string_view to_string(ZetaRule rule) {
  switch (rule) {
    case ZetaRule::kSqrtAlpha: return "sqrt_alpha";
    case ZetaRule::kTheoretical: return "theoretical";
    case ZetaRule::kFixed: return "fixed";
  }
  return "unknown";
}

EstimatorMode estimator_mode_from_string(std::string_view name) {
  if (name == "regular_smooth") return EstimatorMode::kRegularSmooth;
  if (name == "super_smooth") return EstimatorMode::kSuperSmooth;
  if (name == "boxcar") return EstimatorMode::kBoxcar;
  throw EstimatorError("unknown estimator mode '" + std::string(name) + "'");
}

SigmaSource sigma_source_from_string(std::string_view name) {
  if (name == "known") return SigmaSource::kKnown;
  if (name == "mad" || name == "mad_estimated") return SigmaSource::kMadEstimated;
  throw EstimatorError("unknown sigma source '" + std::string(name) + "'");
}

ScaleRule scale_rule_from_string(std::string_view name) {
  if (name == "data_driven") return ScaleRule::kDataDriven;
  if (name == "theoretical") return ScaleRule::kTheoretical;
  throw EstimatorError("unknown scale rule '" + std::string(name) + "'");
}

ZetaRule zeta_rule_from_string(std::string_view name) {
  if (name == "sqrt_alpha") return ZetaRule::kSqrtAlpha;
  if (name == "theoretical" || name == "four_sqrt_alpha") return ZetaRule::kTheoretical;
  if (name == "fixed") return ZetaRule::kFixed;
  throw EstimatorError("unknown zeta rule '" + std::string(name) + "'");
}

EstimatorMode mode_for_kernel(KernelFamily family) {
  switch (family) {
    case KernelFamily::kSuperSmooth: return EstimatorMode::kSuperSmooth;
    case KernelFamily::kBoxcar: return EstimatorMode::kBoxcar;
    default: return EstimatorMode::kRegularSmooth;
  }
}

void EstimatorConfig::validate() const {
  if (zeta_rule == ZetaRule::kFixed && !(zeta >= 0.0 && std::isfinite(zeta)))
    throw EstimatorError("zeta must be finite and non-negative");
  if (!(p >= 1.0)) throw EstimatorError("p must be at least 1");
  if (!(epsilon > 0.0)) throw EstimatorError("epsilon must be positive");
  if (j0 && *j0 < 0) throw EstimatorError("j0 must be non-negative");
  if (j0 && j1 && *j1 < *j0) throw EstimatorError("j1 must not be below j0");
}

// ---------------------------------------------------------------------------

namespace {

double power_of_m(long m, double exponent) {
  const double a = static_cast<double>(std::max(std::labs(m), 1L));
  return exponent == 0.0 ? 1.0 : std::pow(a, exponent);
}

void check_sigma(std::span<const double> sigma, std::size_t channels) {
  if (sigma.size() != channels) throw EstimatorError("one sigma per channel is required");
  for (double s : sigma)
    if (!(s >= 0.0) || !std::isfinite(s)) throw EstimatorError("sigma must be finite and non-negative");
}

bool any_zero(std::span<const double> sigma) {
  return std::any_of(sigma.begin(), sigma.end(), [](double s) { return s == 0.0; });
}

// Fusion weights with noiseless channels taking over: if any sigma is zero, only those
// channels are used, each with the sigma-free part of the optimal weight.
std::vector<double> fusion_weights(long m, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                                   std::size_t n, bool noiseless) {
  std::vector<double> w(channels.size());
  const double nd = static_cast<double>(n);
  for (std::size_t l = 0; l < channels.size(); ++l) {
    const double alpha = channels[l].lrd.alpha;
    const double base = std::pow(nd, alpha) * power_of_m(m, 1.0 - alpha);
    if (noiseless)
      w[l] = sigma[l] == 0.0 ? base : 0.0;
    else
      w[l] = base / (sigma[l] * sigma[l]);
  }
  return w;
}

// Sum_l sigma^-2 n^alpha |m|^(2H-1) |g|^2; infinite when a noiseless channel sees m.
double precision_at(long m, const std::vector<ChannelSpec>& channels, std::span<const double> sigma, std::size_t n) {
  double total = 0.0;
  const double nd = static_cast<double>(n);
  for (std::size_t l = 0; l < channels.size(); ++l) {
    const double g2 = std::norm(fourier_multiplier(channels[l].kernel, m));
    if (g2 == 0.0) continue;
    if (sigma[l] == 0.0) return std::numeric_limits<double>::infinity();
    const double alpha = channels[l].lrd.alpha;
    total += std::pow(nd, alpha) * power_of_m(m, 1.0 - alpha) * g2 / (sigma[l] * sigma[l]);
  }
  return total;
}

int clamp_level(int j, int lo, int hi) { return std::max(lo, std::min(j, hi)); }

}  // namespace

ChannelRates channel_rates(const std::vector<ChannelSpec>& channels, std::span<const double> sigma, std::size_t n,
                           EstimatorMode mode) {
  if (channels.empty()) throw EstimatorError("at least one channel is required");
  check_sigma(sigma, channels.size());
  ChannelRates r;
  for (std::size_t l = 0; l < channels.size(); ++l) {
    const auto& ch = channels[l];
    r.alpha.push_back(ch.lrd.alpha);
    r.nu.push_back(ch.kernel.dip());
    r.theta.push_back(ch.kernel.family == KernelFamily::kSuperSmooth ? ch.kernel.theta : 0.0);
    r.beta.push_back(ch.kernel.beta);
    r.sigma.push_back(sigma[l]);
    r.hurst.push_back(ch.lrd.hurst());
  }
  r.alpha_min = *std::min_element(r.alpha.begin(), r.alpha.end());
  r.alpha_max = *std::max_element(r.alpha.begin(), r.alpha.end());
  r.best = optimal_channel(channels, n);
  r.nu_star = r.nu[r.best] + 0.5 * r.alpha[r.best] - 0.5;
  const double m = static_cast<double>(channels.size());
  r.nu_tilde_star = (2.0 * m + 1.0) / (2.0 * m) + 0.5 * r.alpha_max - 0.5;
  r.xi = mode == EstimatorMode::kBoxcar ? r.alpha_min : r.alpha[r.best];
  return r;
}

std::size_t optimal_channel(const std::vector<ChannelSpec>& channels, std::size_t n) {
  if (channels.empty()) throw EstimatorError("at least one channel is required");
  const double nd = static_cast<double>(n);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < channels.size(); ++l) {
    const auto& k = channels[l].kernel;
    const double alpha = channels[l].lrd.alpha;
    const double theta = k.family == KernelFamily::kSuperSmooth ? k.theta : 0.0;
    // Compared on the log scale to avoid overflow of exp(2 theta 2^beta).
    const double v = -alpha * std::log(nd) + (alpha + 2.0 * k.dip()) * std::log(2.0) +
                     2.0 * theta * std::pow(2.0, k.beta);
    if (v < best_value) {
      best_value = v;
      best = l;
    }
  }
  return best;
}

std::vector<double> optimal_weights(long m, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                                    std::size_t n) {
  check_sigma(sigma, channels.size());
  if (any_zero(sigma)) throw EstimatorError("optimal weights need sigma > 0 on every channel");
  return fusion_weights(m, channels, sigma, n, false);
}

HalfSpectrum fuse_spectrum(const MultichannelObservation& obs, std::span<const double> sigma, long max_freq,
                           bool strict, std::vector<long>* dropped) {
  obs.validate();
  check_sigma(sigma, obs.channel_count());
  const std::size_t n = obs.n;
  const bool noiseless = any_zero(sigma);
  HalfSpectrum out(n);
  const long top = std::min(max_freq, static_cast<long>(n / 2));
  std::vector<long> bad;
  for (long m = 0; m <= top; ++m) {
    const auto w = fusion_weights(m, obs.channels, sigma, n, noiseless);
    complex num = 0.0;
    double den = 0.0;
    for (std::size_t l = 0; l < obs.channel_count(); ++l) {
      const complex g = fourier_multiplier(obs.channels[l].kernel, m);
      num += w[l] * std::conj(g) * obs.spectra[l].bin(static_cast<std::size_t>(m));
      den += w[l] * std::norm(g);
    }
    if (!(den >= DBL_MIN) || !std::isfinite(den)) {
      bad.push_back(m);
      continue;
    }
    out.bin(static_cast<std::size_t>(m)) = num / den;
  }
  if (!bad.empty() && strict) {
    std::ostringstream msg;
    msg << "fused denominator vanishes at " << bad.size() << " frequencies (first m = " << bad.front() << ")";
    throw DegenerateFrequencyError(msg.str(), bad);
  }
  if (dropped) *dropped = std::move(bad);
  return out;
}

CoeffEstimate estimate_wavelet_coeffs(const MultichannelObservation& obs, std::span<const double> sigma, int j0,
                                      int j1, bool strict) {
  long max_freq = scaling_high(j0);
  if (j1 >= j0) max_freq = std::max(max_freq, cj_high(j1));
  CoeffEstimate out;
  const HalfSpectrum fused = fuse_spectrum(obs, sigma, max_freq, strict, &out.dropped);
  out.coeffs = analyze_spectrum(fused, j0, j1);
  return out;
}

namespace {

// With skip set, frequencies of vanishing precision are left out, matching the dropped
// frequencies of the non-strict coefficient estimate.
double variance_sum(int j, long k, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                    std::size_t n, bool skip) {
  require_grid(n);
  check_sigma(sigma, channels.size());
  if (j < 0 || j >= grid_level(n)) throw EstimatorError("level out of range");
  const long half = static_cast<long>(n / 2);
  double total = 0.0;
  std::vector<long> bad;
  for (long m = cj_low(j); m <= std::min(cj_high(j), half); ++m) {
    const double prec = precision_at(m, channels, sigma, n);
    if (!(prec >= DBL_MIN)) {
      bad.push_back(m);
      continue;
    }
    // +m and -m carry equal |Psi|^2 and precision; the Nyquist bin is a single real coefficient.
    const double weight = m == half ? 1.0 : 2.0;
    total += weight * std::norm(psi_fourier_coeff(j, k, m)) / prec;
  }
  if (!bad.empty() && !skip)
    throw DegenerateFrequencyError("coefficient variance undefined: vanishing precision at m = " +
                                       std::to_string(bad.front()),
                                   bad);
  return total;
}

}  // namespace

double coeff_variance(int j, long k, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                      std::size_t n) {
  return variance_sum(j, k, channels, sigma, n, false);
}

double tau_j(int j, const std::vector<ChannelSpec>& channels, std::span<const double> sigma, std::size_t n,
             double xi) {
  return std::sqrt(std::pow(static_cast<double>(n), xi) * coeff_variance(j, 0, channels, sigma, n));
}

double c_n(double n, double xi) {
  if (!(n >= 2.0)) throw EstimatorError("c_n needs n >= 2");
  return std::sqrt(std::log(n) / std::pow(n, xi));
}

double threshold(int j, double zeta, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                 std::size_t n, double xi) {
  if (zeta == 0.0) return 0.0;
  return zeta * tau_j(j, channels, sigma, n, xi) * c_n(static_cast<double>(n), xi);
}

double theoretical_zeta(double p, double xi) { return 2.0 * std::sqrt(std::max(p, 2.0) * 2.0 * xi); }

double resolve_zeta(const EstimatorConfig& config, double alpha_best, double xi) {
  switch (config.zeta_rule) {
    case ZetaRule::kSqrtAlpha: return std::sqrt(alpha_best);
    case ZetaRule::kTheoretical: return theoretical_zeta(config.p, xi);
    case ZetaRule::kFixed: return config.zeta;
  }
  return config.zeta;
}

int theoretical_j1(EstimatorMode mode, const ChannelRates& rates, std::size_t n, int j0) {
  require_grid(n, 4);
  const double nd = static_cast<double>(n);
  const int big_j = grid_level(n);
  double alpha = 0.0;
  double nu = 0.0;
  switch (mode) {
    case EstimatorMode::kRegularSmooth:
      alpha = rates.alpha[rates.best];
      nu = rates.nu_star;
      break;
    case EstimatorMode::kBoxcar:
      alpha = rates.alpha_min;
      nu = rates.nu_tilde_star;
      break;
    case EstimatorMode::kSuperSmooth: throw EstimatorError("theoretical_j1 is not defined for super-smooth mode");
  }
  const double log2_value = (alpha * std::log2(nd) - std::log2(std::log(nd))) / (2.0 * nu + 1.0);
  return clamp_level(static_cast<int>(std::floor(log2_value)), j0, big_j - 2);
}

int theoretical_j0_supersmooth(const ChannelRates& rates, std::size_t n, double epsilon) {
  require_grid(n, 4);
  const std::size_t b = rates.best;
  const double theta = rates.theta[b];
  if (!(theta > 0.0)) throw EstimatorError("super_smooth mode requires theta > 0 for the optimal channel");
  const double alpha = rates.alpha[b];
  if (!(epsilon < alpha)) throw EstimatorError("epsilon must be below alpha of the optimal channel");
  const double value = (alpha - epsilon) * std::log(static_cast<double>(n)) / (2.0 * theta);
  const double j0 = std::round(std::log2(value) / rates.beta[b]);
  return clamp_level(static_cast<int>(j0), 0, grid_level(n) - 2);
}

StoppingTime stopping_time(std::span<const complex> probe, double alpha, double eps) {
  if (probe.size() < 3) throw EstimatorError("probe must cover m = 0..n/2 with n >= 4");
  const long last = static_cast<long>(probe.size()) - 2;  // n/2 - 1
  const double scale = eps * std::log(1.0 / (eps * eps));
  for (long w = 1; w <= last; ++w) {
    const double envelope = std::pow(static_cast<double>(w), 0.5 * alpha) * scale;
    if (std::abs(probe[static_cast<std::size_t>(w)]) <= envelope) return {w, true};
  }
  return {last, false};
}

FineScaleSelection data_driven_j1(const std::vector<std::vector<complex>>& probes, std::span<const double> alpha,
                                  std::span<const double> sigma, std::size_t n) {
  require_grid(n, 4);
  if (probes.empty() || probes.size() != alpha.size() || probes.size() != sigma.size())
    throw EstimatorError("one probe, alpha and sigma per channel is required");
  const int big_j = grid_level(n);
  FineScaleSelection sel;
  long best_f = -1;
  for (std::size_t l = 0; l < probes.size(); ++l) {
    const double eps = sigma[l] * std::pow(static_cast<double>(n), -0.5 * alpha[l]);
    StoppingTime f;
    if (eps > 0.0) {
      f = stopping_time(probes[l], alpha[l], eps);
    } else {
      f = {static_cast<long>(n / 2) - 1, false};
    }
    const int jl = clamp_level(static_cast<int>(std::floor(std::log2(static_cast<double>(f.value)))) - 1, 0,
                               big_j - 2);
    sel.per_channel.push_back(jl);
    sel.stopping.push_back(f);
    if (f.value > best_f) {
      best_f = f.value;
      sel.best_channel = l;
    }
  }
  sel.j1 = *std::max_element(sel.per_channel.begin(), sel.per_channel.end());
  return sel;
}

std::size_t data_driven_best_channel(const std::vector<std::vector<complex>>& probes, std::span<const double> alpha,
                                     std::span<const double> sigma, std::size_t n) {
  return data_driven_j1(probes, alpha, sigma, n).best_channel;
}

std::size_t EstimateDiagnostics::total_survivors() const {
  std::size_t t = 0;
  for (auto s : survivors) t += s;
  return t;
}

std::size_t EstimateDiagnostics::total_details() const {
  std::size_t t = 0;
  for (auto s : level_size) t += s;
  return t;
}

namespace {

EstimateDiagnostics prepare(const MultichannelObservation& obs, const EstimatorConfig& config) {
  obs.validate();
  config.validate();
  require_grid(obs.n, 16);
  EstimateDiagnostics d;
  d.mode = config.mode;
  d.sigma_known = obs.spectral_sigma;
  for (std::size_t l = 0; l < obs.channel_count(); ++l)
    d.sigma_mad.push_back(estimate_sigma_mad(obs.samples[l], obs.channels[l].lrd.alpha));
  d.sigma_used = config.sigma_source == SigmaSource::kKnown ? d.sigma_known : d.sigma_mad;
  return d;
}

}  // namespace

EstimateResult hard_threshold_estimate(const MultichannelObservation& obs, const EstimatorConfig& config) {
  if (config.mode == EstimatorMode::kSuperSmooth)
    throw EstimatorError("hard-threshold estimation needs regular_smooth or boxcar mode");
  EstimateResult res;
  EstimateDiagnostics& d = res.diagnostics;
  d = prepare(obs, config);
  const std::size_t n = obs.n;
  const int big_j = grid_level(n);
  const ChannelRates rates = channel_rates(obs.channels, d.sigma_used, n, config.mode);

  d.j0 = config.j0.value_or(0);
  if (d.j0 > big_j - 2) throw EstimatorError("j0 must be at most log2(n) - 2");
  d.best_channel = rates.best;
  d.j1_theoretical = theoretical_j1(config.mode, rates, n, d.j0);
  if (config.j1) {
    if (*config.j1 > big_j - 2)
      throw TransformError("j1 = " + std::to_string(*config.j1) + " aliases; it must be at most log2(n) - 2");
    d.j1 = *config.j1;
  } else if (config.scale_rule == ScaleRule::kDataDriven) {
    const auto probes = probe_channels(obs, config.probe_seed, config.probe_sign);
    const auto sel = data_driven_j1(probes, rates.alpha, d.sigma_used, n);
    d.j1 = std::max(sel.j1, d.j0);
    d.j1_per_channel = sel.per_channel;
    for (const auto& f : sel.stopping) d.stopping_times.push_back(f.value);
    d.best_channel = sel.best_channel;
    d.best_channel_data_driven = true;
  } else {
    d.j1 = d.j1_theoretical;
  }

  d.xi = config.mode == EstimatorMode::kBoxcar ? rates.alpha_min : rates.alpha[d.best_channel];
  d.zeta = resolve_zeta(config, rates.alpha[d.best_channel], d.xi);
  d.cn = c_n(static_cast<double>(n), d.xi);
  if (d.zeta < theoretical_zeta(config.p, d.xi)) {
    std::ostringstream w;
    w << "zeta = " << d.zeta << " is below the theoretical bound " << theoretical_zeta(config.p, d.xi);
    d.warnings.push_back(w.str());
  }

  auto est = estimate_wavelet_coeffs(obs, d.sigma_used, d.j0, d.j1, config.strict_degenerate);
  d.dropped_frequencies = std::move(est.dropped);
  if (!d.dropped_frequencies.empty())
    d.warnings.push_back("dropped " + std::to_string(d.dropped_frequencies.size()) + " degenerate frequencies");
  res.coeffs = std::move(est.coeffs);

  for (int j = d.j0; j <= d.j1; ++j) {
    const double tau =
        std::sqrt(std::pow(static_cast<double>(n), d.xi) * variance_sum(j, 0, obs.channels, d.sigma_used, n, true));
    const double lambda = d.zeta == 0.0 ? 0.0 : d.zeta * tau * d.cn;
    std::size_t kept = 0;
    for (double& b : res.coeffs.detail(j)) {
      if (std::abs(b) >= lambda)
        ++kept;
      else
        b = 0.0;
    }
    d.lambda.push_back(lambda);
    d.survivors.push_back(kept);
    d.level_size.push_back(std::size_t{1} << j);
  }
  res.estimate = inverse_transform(res.coeffs, n);
  return res;
}

EstimateResult linear_estimate(const MultichannelObservation& obs, const EstimatorConfig& config) {
  if (config.mode != EstimatorMode::kSuperSmooth) throw EstimatorError("linear estimation needs super_smooth mode");
  EstimateResult res;
  EstimateDiagnostics& d = res.diagnostics;
  d = prepare(obs, config);
  const std::size_t n = obs.n;
  const ChannelRates rates = channel_rates(obs.channels, d.sigma_used, n, config.mode);
  if (!(config.epsilon < rates.alpha_min)) throw EstimatorError("epsilon must lie in (0, min alpha)");
  d.best_channel = rates.best;
  d.xi = rates.alpha[rates.best];
  const int auto_j0 = theoretical_j0_supersmooth(rates, n, config.epsilon);
  d.j0 = config.j0.value_or(auto_j0);
  if (d.j0 > grid_level(n) - 2) throw EstimatorError("j0 must be at most log2(n) - 2");
  d.j1 = d.j0 - 1;
  d.j1_theoretical = d.j1;
  auto est = estimate_wavelet_coeffs(obs, d.sigma_used, d.j0, d.j0 - 1, config.strict_degenerate);
  d.dropped_frequencies = std::move(est.dropped);
  res.coeffs = std::move(est.coeffs);
  res.estimate = inverse_transform(res.coeffs, n);
  return res;
}

EstimateResult estimate(const MultichannelObservation& obs, const EstimatorConfig& config) {
  return config.mode == EstimatorMode::kSuperSmooth ? linear_estimate(obs, config)
                                                    : hard_threshold_estimate(obs, config);
}

Signal naive_inverse(const MultichannelObservation& obs, std::span<const double> sigma) {
  const int big_j = grid_level(obs.n);
  const auto est = estimate_wavelet_coeffs(obs, sigma, 0, big_j - 2, false);
  return inverse_transform(est.coeffs, obs.n);
}

}  // namespace mwd

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mwd/meyer.hpp"
#include "mwd/model.hpp"

namespace mwd {

enum class EstimatorMode { kRegularSmooth, kSuperSmooth, kBoxcar };
enum class SigmaSource { kKnown, kMadEstimated };
enum class ScaleRule { kDataDriven, kTheoretical };
enum class ZetaRule { kSqrtAlpha, kTheoretical, kFixed };

std::string_view to_string(EstimatorMode mode);
std::string_view to_string(SigmaSource source);
std::string_view to_string(ScaleRule rule);
std::string_view to_string(ZetaRule rule);
EstimatorMode estimator_mode_from_string(std::string_view name);
SigmaSource sigma_source_from_string(std::string_view name);
ScaleRule scale_rule_from_string(std::string_view name);
ZetaRule zeta_rule_from_string(std::string_view name);

/// Mode implied by a kernel family (direct counts as regular-smooth with nu = 0).
EstimatorMode mode_for_kernel(KernelFamily family);

class EstimatorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the fused denominator vanishes at required frequencies.
class DegenerateFrequencyError : public EstimatorError {
 public:
  DegenerateFrequencyError(const std::string& what, std::vector<long> freqs)
      : EstimatorError(what), frequencies(std::move(freqs)) {}
  std::vector<long> frequencies;
};

struct EstimatorConfig {
  EstimatorMode mode = EstimatorMode::kRegularSmooth;
  ZetaRule zeta_rule = ZetaRule::kSqrtAlpha;
  double zeta = 1.0;  // used by ZetaRule::kFixed
  double p = 2.0;
  std::optional<int> j0;
  std::optional<int> j1;
  ScaleRule scale_rule = ScaleRule::kDataDriven;
  SigmaSource sigma_source = SigmaSource::kKnown;
  double epsilon = 0.1;
  /// Throw on degenerate frequencies instead of dropping them.
  bool strict_degenerate = false;
  /// Seed and sign for the probe channels of the data-driven selectors.
  std::uint64_t probe_seed = 0;
  double probe_sign = 1.0;

  void validate() const;
};

/// Rate parameters of a set of channels at sample size n.
struct ChannelRates {
  std::vector<double> alpha, nu, theta, beta, sigma, hurst;
  double alpha_min = 1.0;
  double alpha_max = 1.0;
  std::size_t best = 0;        // optimal channel by the deterministic criterion
  double nu_star = 0.0;        // nu_best + alpha_best/2 - 1/2
  double nu_tilde_star = 0.0;  // (2M+1)/(2M) + alpha_max/2 - 1/2
  double xi = 1.0;             // alpha_best, or alpha_min for box-car

  std::size_t size() const { return alpha.size(); }
};

/// sigma are the sequence-space noise levels (spectral sigma) of the channels.
ChannelRates channel_rates(const std::vector<ChannelSpec>& channels, std::span<const double> sigma, std::size_t n,
                           EstimatorMode mode);

/// argmin_l n^-alpha_l 2^(alpha_l + 2 nu_l) exp(2 theta_l 2^beta_l); smallest index on ties.
std::size_t optimal_channel(const std::vector<ChannelSpec>& channels, std::size_t n);

/// gamma*_{m,l} = n^alpha_l sigma_l^-2 max(|m|,1)^(2H_l - 1).
std::vector<double> optimal_weights(long m, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                                    std::size_t n);

/// Fused spectrum F_m = sum_l gamma g_l-bar y_l / sum_l gamma |g_l|^2 for 0 <= m <= max_freq,
/// zero above. Frequencies whose denominator underflows are zeroed and listed in dropped
/// (or rejected with DegenerateFrequencyError when strict).
HalfSpectrum fuse_spectrum(const MultichannelObservation& obs, std::span<const double> sigma, long max_freq,
                           bool strict, std::vector<long>* dropped = nullptr);

struct CoeffEstimate {
  WaveletCoeffs coeffs;
  std::vector<long> dropped;
};

/// Unthresholded b_{j,k} and a_{j0,k} estimated from the fused spectrum.
CoeffEstimate estimate_wavelet_coeffs(const MultichannelObservation& obs, std::span<const double> sigma, int j0,
                                      int j1, bool strict = false);

/// Var(b_{j,k}) = sum_{m in C_j} |Psi^{jk}_m|^2 / sum_l sigma_l^-2 n^alpha_l |m|^(2H_l-1) |g_{m,l}|^2.
double coeff_variance(int j, long k, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                      std::size_t n);

/// tau_j = sqrt(n^xi coeff_variance(j, 0, ...)).
double tau_j(int j, const std::vector<ChannelSpec>& channels, std::span<const double> sigma, std::size_t n,
             double xi);

/// c_n = sqrt(ln n / n^xi). Takes n as a real so non-integer test values work.
double c_n(double n, double xi);

/// lambda_j = zeta tau_j c_n.
double threshold(int j, double zeta, const std::vector<ChannelSpec>& channels, std::span<const double> sigma,
                 std::size_t n, double xi);

/// 2 sqrt(max(p, 2) 2 xi).
double theoretical_zeta(double p, double xi);

/// Resolves the configured zeta rule for the given xi.
double resolve_zeta(const EstimatorConfig& config, double alpha_best, double xi);

/// Fine level from the rate rule, floor(log2(...)) clamped to [j0, J-2].
int theoretical_j1(EstimatorMode mode, const ChannelRates& rates, std::size_t n, int j0 = 0);

/// Coarse level of the linear estimator: round(log2(((alpha - eps) ln n / (2 theta))^(1/beta))),
/// clamped to [0, J-2], using the optimal channel.
int theoretical_j0_supersmooth(const ChannelRates& rates, std::size_t n, double epsilon);

struct StoppingTime {
  long value = 1;
  bool crossed = false;
};

/// min{w > 0 : |y~_w| <= w^(alpha/2) eps ln(eps^-2)} over w = 1..n/2-1; probe holds m = 0..n/2.
/// Returns n/2 - 1 with crossed = false if the envelope is never reached.
StoppingTime stopping_time(std::span<const complex> probe, double alpha, double eps);

struct FineScaleSelection {
  int j1 = 0;
  std::vector<int> per_channel;
  std::vector<StoppingTime> stopping;
  std::size_t best_channel = 0;  // argmax of the stopping times
};

/// j_l = floor(log2 F_l) - 1 clamped to [0, J-2]; j1 = max_l j_l; best channel = argmax_l F_l.
FineScaleSelection data_driven_j1(const std::vector<std::vector<complex>>& probes, std::span<const double> alpha,
                                  std::span<const double> sigma, std::size_t n);

std::size_t data_driven_best_channel(const std::vector<std::vector<complex>>& probes, std::span<const double> alpha,
                                     std::span<const double> sigma, std::size_t n);

struct EstimateDiagnostics {
  EstimatorMode mode = EstimatorMode::kRegularSmooth;
  std::size_t best_channel = 0;
  bool best_channel_data_driven = false;
  int j0 = 0;
  int j1 = 0;
  int j1_theoretical = 0;
  std::vector<int> j1_per_channel;
  std::vector<long> stopping_times;
  double zeta = 0.0;
  double xi = 1.0;
  double cn = 0.0;
  std::vector<double> lambda;  // per detail level j0..j1
  std::vector<std::size_t> survivors;
  std::vector<std::size_t> level_size;
  std::vector<double> sigma_known;
  std::vector<double> sigma_mad;
  std::vector<double> sigma_used;
  std::vector<long> dropped_frequencies;
  std::vector<std::string> warnings;

  std::size_t total_survivors() const;
  std::size_t total_details() const;
};

struct EstimateResult {
  Signal estimate;
  WaveletCoeffs coeffs;  // after thresholding
  EstimateDiagnostics diagnostics;
};

/// Hard-threshold wavelet deconvolution; regular-smooth and box-car modes.
EstimateResult hard_threshold_estimate(const MultichannelObservation& obs, const EstimatorConfig& config);

/// Linear projection onto the level-j0 scaling space; super-smooth mode.
EstimateResult linear_estimate(const MultichannelObservation& obs, const EstimatorConfig& config);

/// Dispatches on config.mode.
EstimateResult estimate(const MultichannelObservation& obs, const EstimatorConfig& config);

/// Unthresholded inverse over every level j0 = 0 .. J-2.
Signal naive_inverse(const MultichannelObservation& obs, std::span<const double> sigma);

}  // namespace mwd

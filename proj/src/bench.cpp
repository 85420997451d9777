#include "mwd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "mwd/io.hpp"

namespace mwd {

const std::vector<std::string>& signal_names() {
  static const std::vector<std::string> names = {"lidar", "doppler", "bumps", "blocks", "smooth"};
  return names;
}

namespace {

constexpr double kJumps[] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kBlockHeights[] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr double kBumpHeights[] = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr double kBumpWidths[] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005};

// LIDAR skyline: level on [edge_i, edge_{i+1}), zero outside [0.20, 0.72).
constexpr double kLidarEdges[] = {0.20, 0.24, 0.30, 0.34, 0.44, 0.48, 0.56, 0.62, 0.66, 0.72};
constexpr double kLidarLevels[] = {0.5, 1.0, 0.7, 1.3, 0.9, 1.1, 0.4, 0.8, 0.3};

double lidar(double t) {
  for (std::size_t i = 0; i + 1 < std::size(kLidarEdges); ++i)
    if (t >= kLidarEdges[i] && t < kLidarEdges[i + 1]) return kLidarLevels[i];
  return 0.0;
}

double doppler(double t) { return std::sqrt(t * (1.0 - t)) * std::sin(2.1 * kPi / (t + 0.05)); }

double bumps(double t) {
  double v = 0.0;
  for (std::size_t i = 0; i < std::size(kJumps); ++i)
    v += kBumpHeights[i] * std::pow(1.0 + std::abs(t - kJumps[i]) / kBumpWidths[i], -4.0);
  return v;
}

double blocks(double t) {
  double v = 0.0;
  for (std::size_t i = 0; i < std::size(kJumps); ++i)
    if (t >= kJumps[i]) v += kBlockHeights[i];
  return v;
}

double smooth(double t) { return std::exp(std::cos(2.0 * kPi * t)) - 1.0; }

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double standard_error(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

}  // namespace

Signal test_signal(std::string_view name, std::size_t n) {
  require_grid(n);
  double (*fn)(double) = nullptr;
  if (name == "lidar") fn = lidar;
  else if (name == "doppler") fn = doppler;
  else if (name == "bumps") fn = bumps;
  else if (name == "blocks") fn = blocks;
  else if (name == "smooth") fn = smooth;
  else throw std::invalid_argument("unknown test signal '" + std::string(name) + "'");
  Signal f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = fn(static_cast<double>(i) / static_cast<double>(n));
  return f;
}

double l2_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l2_error: length mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / static_cast<double>(a.size()));
}

double rmse(const std::vector<Signal>& estimates, std::span<const double> truth) {
  if (estimates.empty()) throw std::invalid_argument("rmse: no estimates");
  double total = 0.0;
  for (const auto& e : estimates) total += l2_error(e, truth);
  return total / static_cast<double>(estimates.size());
}

std::vector<ChannelSpec> homogeneous_channels(std::size_t m, double nu, double alpha, NoiseGenerator generator) {
  ChannelSpec ch;
  ch.kernel = nu == 0.0 ? KernelSpec::direct() : KernelSpec::regular_smooth(nu);
  ch.lrd = LrdSpec{alpha, 1.0, generator};
  return std::vector<ChannelSpec>(m, ch);
}

ReplicateOutcome run_replicate(std::span<const double> truth, const std::vector<ChannelSpec>& channels,
                               const EstimatorConfig& config, const CellOptions& options, std::size_t r) {
  const std::size_t draw = options.antithetic ? r / 2 : r;
  const double sign = options.antithetic && r % 2 == 1 ? -1.0 : 1.0;
  const std::uint64_t seed = derive_seed(options.seed, {stream::kReplicate, draw});
  const auto obs = simulate(truth, channels, options.snr_db, seed, sign);
  EstimatorConfig cfg = config;
  cfg.probe_seed = derive_seed(seed, {stream::kProbe});
  cfg.probe_sign = sign;
  const auto res = estimate(obs, cfg);
  ReplicateOutcome out;
  out.error = l2_error(res.estimate, truth);
  out.j1 = res.diagnostics.j1;
  out.best_channel = res.diagnostics.best_channel;
  out.survivors = res.diagnostics.total_survivors();
  out.details = res.diagnostics.total_details();
  if (options.with_naive) out.naive_error = l2_error(naive_inverse(obs, res.diagnostics.sigma_used), truth);
  return out;
}

CellResult summarize(const std::vector<ReplicateOutcome>& outcomes, bool antithetic) {
  if (outcomes.empty()) throw std::invalid_argument("summarize: no replicates");
  CellResult c;
  std::size_t surv = 0, total = 0;
  double j1_sum = 0.0, naive_sum = 0.0;
  std::map<std::size_t, std::size_t> votes;
  for (const auto& o : outcomes) {
    c.errors.push_back(o.error);
    c.j1.push_back(o.j1);
    c.best_channel.push_back(o.best_channel);
    j1_sum += o.j1;
    naive_sum += o.naive_error;
    surv += o.survivors;
    total += o.details;
    ++votes[o.best_channel];
  }
  const double reps = static_cast<double>(outcomes.size());
  c.rmse = mean(c.errors);
  if (antithetic && outcomes.size() % 2 == 0) {
    std::vector<double> pairs;
    for (std::size_t i = 0; i < c.errors.size(); i += 2) pairs.push_back(0.5 * (c.errors[i] + c.errors[i + 1]));
    c.se = standard_error(pairs);
  } else {
    c.se = standard_error(c.errors);
  }
  c.mean_j1 = j1_sum / reps;
  c.naive_rmse = naive_sum / reps;
  c.survival_fraction = total ? static_cast<double>(surv) / static_cast<double>(total) : 0.0;
  std::size_t best_votes = 0;
  for (const auto& [ch, v] : votes)
    if (v > best_votes) {
      best_votes = v;
      c.modal_best_channel = ch;
    }
  return c;
}

CellResult run_cell(std::span<const double> truth, const std::vector<ChannelSpec>& channels,
                    const EstimatorConfig& config, const CellOptions& options) {
  if (options.reps == 0) throw std::invalid_argument("run_cell: reps must be positive");
  std::vector<ReplicateOutcome> outcomes(options.reps);
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t r = 0; r < options.reps; ++r) {
    try {
      outcomes[r] = run_replicate(truth, channels, config, options, r);
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw std::runtime_error(failure);
  return summarize(outcomes, options.antithetic);
}

std::string ZetaChoice::label() const {
  if (rule == ZetaRule::kFixed) return "fixed:" + format_exact(value);
  return std::string(to_string(rule));
}

void ExperimentGrid::validate() const {
  if (signals.empty() || nus.empty() || alphas.empty() || ms.empty() || snr_dbs.empty() || zetas.empty())
    throw std::invalid_argument("experiment grid lists must be nonempty");
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  require_grid(n, 16);
  for (const auto& s : signals) (void)test_signal(s, 16);
  for (auto m : ms)
    if (m == 0) throw std::invalid_argument("M must be positive");
  for (double a : alphas)
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  for (double nu : nus)
    if (!(nu >= 0.0)) throw std::invalid_argument("nu must be non-negative");
}

const GridCell* GridResult::find(const CellKey& key) const {
  for (const auto& c : cells)
    if (c.key == key) return &c;
  return nullptr;
}

GridResult run_grid(const ExperimentGrid& grid) {
  grid.validate();
  GridResult out;
  for (const auto& signal : grid.signals) {
    const Signal truth = test_signal(signal, grid.n);
    for (double snr : grid.snr_dbs)
      for (const auto& z : grid.zetas)
        for (double nu : grid.nus)
          for (double alpha : grid.alphas)
            for (std::size_t m : grid.ms) {
              GridCell cell;
              cell.key = CellKey{signal, nu, alpha, m, snr, z.label()};
              EstimatorConfig cfg;
              cfg.mode = EstimatorMode::kRegularSmooth;
              cfg.zeta_rule = z.rule;
              cfg.zeta = z.value;
              cfg.sigma_source = grid.sigma_source;
              cfg.scale_rule = grid.scale_rule;
              CellOptions opt;
              opt.reps = grid.reps;
              opt.seed = grid.master_seed;
              opt.snr_db = snr;
              opt.antithetic = grid.antithetic;
              try {
                cell.result = run_cell(truth, homogeneous_channels(m, nu, alpha, grid.generator), cfg, opt);
              } catch (const std::exception& e) {
                cell.error = e.what();
              }
              out.cells.push_back(std::move(cell));
            }
  }
  return out;
}

namespace {

void write_key(std::ostream& out, const CellKey& k) {
  out << k.signal << ',' << format_exact(k.nu) << ',' << format_exact(k.alpha) << ',' << k.m << ','
      << format_exact(k.snr_db) << ',' << k.zeta;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "signal,nu,alpha,M,snr_db,zeta_rule,rmse,se,mean_j1\n";
  for (const auto& c : result.cells) {
    write_key(out, c.key);
    if (!c.error.empty()) {
      out << ",nan,nan,nan\n";
      continue;
    }
    out << ',' << format_exact(c.result.rmse) << ',' << format_exact(c.result.se) << ','
        << format_exact(c.result.mean_j1) << '\n';
  }
}

void write_grid_markdown(std::ostream& out, const GridResult& result) {
  std::vector<std::size_t> ms;
  for (const auto& c : result.cells)
    if (std::find(ms.begin(), ms.end(), c.key.m) == ms.end()) ms.push_back(c.key.m);
  std::sort(ms.begin(), ms.end());
  out << "| signal | SNR dB | zeta | nu | alpha |";
  for (auto m : ms) out << " M=" << m << " |";
  out << "\n|---|---|---|---|---|";
  for (std::size_t i = 0; i < ms.size(); ++i) out << "---|";
  out << '\n';
  std::vector<CellKey> rows;
  for (const auto& c : result.cells) {
    CellKey row = c.key;
    row.m = 0;
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
  }
  for (const auto& row : rows) {
    out << "| " << row.signal << " | " << short_number(row.snr_db) << " | " << row.zeta << " | "
        << short_number(row.nu) << " | " << short_number(row.alpha) << " |";
    for (auto m : ms) {
      CellKey k = row;
      k.m = m;
      const GridCell* c = result.find(k);
      if (!c)
        out << " |";
      else if (!c->error.empty())
        out << " error |";
      else
        out << ' ' << fixed(c->result.rmse, 3) << " (" << fixed(c->result.mean_j1, 1) << ") |";
    }
    out << '\n';
  }
}

void write_grid_long(std::ostream& out, const GridResult& result) {
  out << "signal,nu,alpha,M,snr_db,zeta_rule,replicate,error,j1,best_channel\n";
  for (const auto& c : result.cells) {
    if (!c.error.empty()) continue;
    for (std::size_t r = 0; r < c.result.errors.size(); ++r) {
      write_key(out, c.key);
      out << ',' << r << ',' << format_exact(c.result.errors[r]) << ',' << c.result.j1[r] << ','
          << c.result.best_channel[r] << '\n';
    }
  }
}

TrendCheck paired_trend(const std::string& name, const GridCell& smaller, const GridCell& larger) {
  TrendCheck t;
  t.name = name;
  t.smaller = smaller.key;
  t.larger = larger.key;
  if (!smaller.error.empty() || !larger.error.empty()) return t;
  const auto& a = smaller.result.errors;
  const auto& b = larger.result.errors;
  if (a.size() != b.size() || a.empty()) return t;
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
  t.mean_diff = mean(diff);
  t.se = standard_error(diff);
  t.passed = t.mean_diff - 1.645 * t.se > 0.0;
  return t;
}

std::vector<TrendCheck> check_trends(const GridResult& result) {
  std::vector<TrendCheck> out;
  std::vector<std::size_t> ms;
  std::vector<double> alphas, nus;
  for (const auto& c : result.cells) {
    if (std::find(ms.begin(), ms.end(), c.key.m) == ms.end()) ms.push_back(c.key.m);
    if (std::find(alphas.begin(), alphas.end(), c.key.alpha) == alphas.end()) alphas.push_back(c.key.alpha);
    if (std::find(nus.begin(), nus.end(), c.key.nu) == nus.end()) nus.push_back(c.key.nu);
  }
  std::sort(ms.begin(), ms.end());
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  std::sort(nus.begin(), nus.end());
  for (const auto& c : result.cells) {
    const CellKey& k = c.key;
    for (std::size_t i = 0; i + 1 < ms.size(); ++i)
      if (k.m == ms[i]) {
        CellKey other = k;
        other.m = ms[i + 1];
        if (const GridCell* o = result.find(other)) out.push_back(paired_trend("M", *o, c));
      }
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
      if (k.alpha == alphas[i]) {
        CellKey other = k;
        other.alpha = alphas[i + 1];
        if (const GridCell* o = result.find(other)) out.push_back(paired_trend("alpha", c, *o));
      }
    for (std::size_t i = 0; i + 1 < nus.size(); ++i)
      if (k.nu == nus[i]) {
        CellKey other = k;
        other.nu = nus[i + 1];
        if (const GridCell* o = result.find(other)) out.push_back(paired_trend("nu", c, *o));
      }
  }
  return out;
}

SlopeResult rate_slope(std::string_view signal, const std::vector<ChannelSpec>& channels,
                       const EstimatorConfig& config, const std::vector<std::size_t>& n_list,
                       const CellOptions& options) {
  if (n_list.size() < 3) throw std::invalid_argument("rate_slope needs at least three sample sizes");
  SlopeResult s;
  std::vector<double> x, y, var;
  for (std::size_t n : n_list) {
    const Signal truth = test_signal(signal, n);
    const CellResult c = run_cell(truth, channels, config, options);
    if (!(c.rmse > 0.0) || !std::isfinite(c.rmse)) throw std::runtime_error("rate_slope: degenerate RMSE");
    s.n.push_back(n);
    s.rmse.push_back(c.rmse);
    s.rmse_se.push_back(c.se);
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(c.rmse));
    var.push_back((c.se / c.rmse) * (c.se / c.rmse));
  }
  const double xbar = mean(x);
  double sxx = 0.0;
  for (double v : x) sxx += (v - xbar) * (v - xbar);
  if (sxx == 0.0) throw std::runtime_error("rate_slope: degenerate regression");
  double slope = 0.0, v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = (x[i] - xbar) / sxx;
    slope += c * y[i];
    v += c * c * var[i];
  }
  s.slope = slope;
  s.se = std::sqrt(v);
  return s;
}

}  // namespace mwd

// mwd: command-line front end.
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 runtime failure,
// 3 trend assertion failure (bench --assert-trends).

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "mwd/bench.hpp"
#include "mwd/io.hpp"

namespace fs = std::filesystem;
using namespace mwd;
using namespace mwd::cli;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  bool assert_trends = false;
  // signals
  std::size_t n = 1024;
};

class TrendFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path out_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("MWD_OUT_DIR"); env && *env) return env;
  return "mwd_out";
}

std::ofstream open_text(const fs::path& p) {
  fs::create_directories(p.parent_path().empty() ? fs::path(".") : p.parent_path());
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

double parse_snr(const Section& s) {
  if (!s.has("snr_db")) return std::numeric_limits<double>::infinity();
  const auto& v = s.raw("snr_db");
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "none"))
    return std::numeric_limits<double>::infinity();
  s.fail("snr_db", "expected a number, \"inf\" or null (noiseless)");
}

Signal load_truth(const Section& s, const char* name_key, const char* file_key) {
  if (s.has(file_key)) return read_signal(s.string(file_key, ""));
  const long n = s.integer("n", 1024);
  if (n < 2 || !is_power_of_two(static_cast<std::size_t>(n))) s.fail("n", "must be a power of two");
  try {
    return test_signal(s.string(name_key, "lidar"), static_cast<std::size_t>(n));
  } catch (const std::invalid_argument& e) {
    s.fail(name_key, e.what());
  }
}

int cmd_simulate(const Options& o) {
  const ConfigFile cfg = load_config(o.config);
  const Section root(cfg, cfg.root);
  root.only({"n", "signal", "signal_file", "snr_db", "seed", "channels"});
  const Signal truth = load_truth(root, "signal", "signal_file");
  std::vector<ChannelSpec> channels;
  if (root.has("channels"))
    for (const auto& c : root.children("channels")) channels.push_back(parse_channel(c));
  else
    channels.push_back(ChannelSpec{});
  const double snr = parse_snr(root);
  const std::uint64_t seed = o.seed.value_or(static_cast<std::uint64_t>(root.integer("seed", 1)));
  require_grid(truth.size());
  const auto obs = simulate(truth, channels, snr, seed);

  const fs::path dir = out_dir(o);
  write_signal(dir / "truth.txt", truth);
  write_observation_csv(dir / "observation.csv", obs.samples);
  write_metadata(dir / "metadata.json", ObservationMetadata{obs.n, seed, snr, obs.channels, obs.sigma});
  std::cout << "wrote " << (dir / "observation.csv").string() << " (" << obs.channel_count() << " channels, n = "
            << obs.n << ")\n";
  return 0;
}

int cmd_estimate(const Options& o) {
  const ConfigFile cfg = load_config(o.config);
  const Section root(cfg, cfg.root);
  root.only({"observation", "metadata", "truth", "estimator"});
  const fs::path dir = out_dir(o);
  const fs::path obs_path = root.string("observation", (dir / "observation.csv").string());
  const fs::path meta_path = root.string("metadata", (dir / "metadata.json").string());
  const ObservationMetadata meta = read_metadata(meta_path);
  auto samples = read_observation_csv(obs_path);
  if (samples.size() != meta.channels.size())
    throw std::invalid_argument(obs_path.string() + " has " + std::to_string(samples.size()) + " channels but " +
                                meta_path.string() + " lists " + std::to_string(meta.channels.size()));
  for (const auto& s : samples)
    if (s.size() != meta.n)
      throw std::invalid_argument(obs_path.string() + " has " + std::to_string(s.size()) + " rows but " +
                                  meta_path.string() + " says n = " + std::to_string(meta.n));
  EstimatorConfig ec;
  if (root.has("estimator")) {
    const Section es = root.child("estimator");
    ec = parse_estimator(es);
    if (!es.has("mode")) ec.mode = mode_for_kernel(meta.channels.front().kernel.family);
  } else {
    ec.mode = mode_for_kernel(meta.channels.front().kernel.family);
  }
  if (o.seed) ec.probe_seed = *o.seed;
  const auto obs = make_observation(meta.channels, std::move(samples), meta.sigma);
  const auto res = estimate(obs, ec);

  write_signal(dir / "reconstruction.txt", res.estimate);
  auto diag = open_text(dir / "diagnostics.json");
  diag << diagnostics_json(res.diagnostics) << '\n';
  std::cout << "mode " << to_string(res.diagnostics.mode) << ", j0 " << res.diagnostics.j0 << ", j1 "
            << res.diagnostics.j1 << ", best channel " << res.diagnostics.best_channel + 1 << '\n';
  if (root.has("truth")) {
    const Signal truth = read_signal(root.string("truth", ""));
    std::cout << "l2 error " << format_exact(l2_error(res.estimate, truth)) << '\n';
  }
  for (const auto& w : res.diagnostics.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int cmd_bench(const Options& o) {
  const ConfigFile cfg = load_config(o.config);
  const Section root(cfg, cfg.root);
  ExperimentGrid grid = parse_grid(root);
  if (o.seed) grid.master_seed = *o.seed;
  const GridResult result = run_grid(grid);

  const fs::path dir = out_dir(o);
  auto csv = open_text(dir / "results.csv");
  write_grid_csv(csv, result);
  auto md = open_text(dir / "results.md");
  write_grid_markdown(md, result);
  auto lg = open_text(dir / "replicates.csv");
  write_grid_long(lg, result);
  write_grid_markdown(std::cout, result);

  bool cell_errors = false;
  for (const auto& c : result.cells)
    if (!c.error.empty()) {
      cell_errors = true;
      std::cerr << "cell " << c.key.signal << " nu=" << c.key.nu << " alpha=" << c.key.alpha << " M=" << c.key.m
                << " failed: " << c.error << '\n';
    }
  if (o.assert_trends) {
    const auto trends = check_trends(result);
    auto tc = open_text(dir / "trends.csv");
    tc << "trend,signal,nu,alpha,M,snr_db,zeta_rule,other_nu,other_alpha,other_M,mean_diff,se,passed\n";
    std::size_t failed = 0;
    for (const auto& t : trends) {
      tc << t.name << ',' << t.smaller.signal << ',' << format_exact(t.smaller.nu) << ','
         << format_exact(t.smaller.alpha) << ',' << t.smaller.m << ',' << format_exact(t.smaller.snr_db) << ','
         << t.smaller.zeta << ',' << format_exact(t.larger.nu) << ',' << format_exact(t.larger.alpha) << ','
         << t.larger.m << ',' << format_exact(t.mean_diff) << ',' << format_exact(t.se) << ','
         << (t.passed ? "true" : "false") << '\n';
      if (!t.passed) {
        ++failed;
        std::cerr << "trend " << t.name << " failed: " << t.smaller.signal << " (nu=" << t.smaller.nu
                  << ", alpha=" << t.smaller.alpha << ", M=" << t.smaller.m << ") vs (nu=" << t.larger.nu
                  << ", alpha=" << t.larger.alpha << ", M=" << t.larger.m << "): mean diff " << t.mean_diff
                  << ", se " << t.se << '\n';
      }
    }
    std::cout << trends.size() - failed << "/" << trends.size() << " trend checks passed\n";
    if (failed || cell_errors) throw TrendFailure(std::to_string(failed) + " trend checks failed");
  }
  return cell_errors ? 2 : 0;
}

int cmd_transform(const Options& o) {
  const ConfigFile cfg = load_config(o.config);
  const Section root(cfg, cfg.root);
  root.only({"direction", "signal", "signal_file", "n", "j0", "j1", "coefficients"});
  const std::string direction = root.string("direction", "forward");
  const fs::path dir = out_dir(o);
  if (direction == "forward") {
    const Signal f = load_truth(root, "signal", "signal_file");
    require_grid(f.size(), 4);
    const int big_j = grid_level(f.size());
    const int j0 = static_cast<int>(root.integer("j0", 0));
    const int j1 = static_cast<int>(root.integer("j1", big_j - 2));
    if (j1 > big_j - 2)
      throw TransformError("j1 = " + std::to_string(j1) + " aliases on n = " + std::to_string(f.size()) +
                           "; it must be at most log2(n) - 2 = " + std::to_string(big_j - 2));
    write_coefficients(dir / "coefficients.csv", forward_transform(f, j0, j1));
    std::cout << "wrote " << (dir / "coefficients.csv").string() << '\n';
  } else if (direction == "inverse") {
    const fs::path src = root.string("coefficients", (dir / "coefficients.csv").string());
    const WaveletCoeffs c = read_coefficients(src);
    const long n = root.integer("n", 0);
    if (n < 4 || !is_power_of_two(static_cast<std::size_t>(n))) root.fail("n", "must be a power of two >= 4");
    write_signal(dir / "signal.txt", inverse_transform(c, static_cast<std::size_t>(n)));
    std::cout << "wrote " << (dir / "signal.txt").string() << '\n';
  } else {
    root.fail("direction", "expected \"forward\" or \"inverse\"");
  }
  return 0;
}

int cmd_signals(const Options& o, const std::vector<std::string>& names) {
  const fs::path dir = out_dir(o);
  for (const auto& name : names.empty() ? signal_names() : names) {
    write_signal(dir / (name + ".txt"), test_signal(name, o.n));
    std::cout << "wrote " << (dir / (name + ".txt")).string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multichannel wavelet deconvolution with long-memory noise"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::vector<std::string> names;
  app.add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "master seed (overrides the config)");
  app.add_option("--threads", o.threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", o.out, "output directory (default $MWD_OUT_DIR or ./mwd_out)");
  app.add_flag("--assert-trends", o.assert_trends, "bench: exit 3 if a monotonicity check fails");

  auto* sim = app.add_subcommand("simulate", "simulate a multichannel observation");
  auto* est = app.add_subcommand("estimate", "estimate the signal from a stored observation");
  auto* bench = app.add_subcommand("bench", "run an experiment grid");
  auto* tr = app.add_subcommand("transform", "forward or inverse Meyer transform");
  auto* sig = app.add_subcommand("signals", "write the test signals");
  sig->add_option("--n", o.n, "grid size")->check(CLI::PositiveNumber);
  sig->add_option("names", names, "signal names (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);

  try {
    if (*sim) return cmd_simulate(o);
    if (*est) return cmd_estimate(o);
    if (*bench) return cmd_bench(o);
    if (*tr) return cmd_transform(o);
    if (*sig) return cmd_signals(o, names);
  } catch (const TrendFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

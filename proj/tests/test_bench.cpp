#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mwd/bench.hpp"
#include "mwd/reference.hpp"

using namespace mwd;

TEST_CASE("test signals") {
  const std::size_t n = 1024;
  CHECK(test_signal("doppler", n)[0] == 0.0);
  for (double v : test_signal("bumps", n)) CHECK(v >= 0.0);
  const Signal b = test_signal("blocks", n);
  std::size_t jumps = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (b[i] != b[i - 1]) ++jumps;
  CHECK(jumps <= 11);
  const Signal l = test_signal("lidar", n);
  for (double v : l) CHECK((v >= 0.0 && v <= 1.3));
  CHECK(l[0] == 0.0);
  CHECK(l[static_cast<std::size_t>(0.40 * n)] == 1.3);
  CHECK(test_signal("smooth", n)[0] == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK_THROWS_AS(test_signal("heavisine", n), std::invalid_argument);
  CHECK_THROWS(test_signal("lidar", 1000));
}

TEST_CASE("rmse") {
  const Signal f = {1.0, 2.0, 3.0, 4.0};
  CHECK(rmse({f, f}, f) == 0.0);
  Signal g = f;
  for (double& v : g) v += 0.25;
  CHECK(rmse({g}, f) == doctest::Approx(0.25));
  Signal a = f, c = f;
  for (double& v : a) v += 0.1;
  for (double& v : c) v -= 0.3;
  CHECK(rmse({a, c}, f) == doctest::Approx(0.2));
  CHECK_THROWS(rmse({}, f));
  CHECK_THROWS(l2_error(f, Signal(3, 0.0)));
}

TEST_CASE("noiseless cell with zeta = 0 inverts a band-limited truth") {
  const std::size_t n = 512;
  HalfSpectrum s(n);
  s.bin(3) = complex(0.2, -0.1);
  s.bin(40) = complex(0.05, 0.3);
  const Signal truth = synthesize(s);
  EstimatorConfig cfg;
  cfg.zeta_rule = ZetaRule::kFixed;
  cfg.zeta = 0.0;
  cfg.j1 = 7;
  CellOptions opt;
  opt.reps = 1;
  opt.snr_db = INFINITY;
  const auto c = run_cell(truth, homogeneous_channels(2, 0.5, 1.0), cfg, opt);
  CHECK(c.rmse < 1e-6);
}

TEST_CASE("parallel cell equals the serial reference bit for bit") {
  const std::size_t n = 512;
  const Signal truth = test_signal("lidar", n);
  EstimatorConfig cfg;
  cfg.sigma_source = SigmaSource::kMadEstimated;
  for (bool anti : {false, true}) {
    CellOptions opt;
    opt.reps = 12;
    opt.seed = 42;
    opt.antithetic = anti;
    opt.with_naive = true;
    const auto par = run_cell(truth, homogeneous_channels(2, 0.3, 0.7), cfg, opt);
    const auto ser = reference::run_cell_serial(truth, homogeneous_channels(2, 0.3, 0.7), cfg, opt);
    CHECK(par.errors == ser.errors);
    CHECK(par.j1 == ser.j1);
    CHECK(par.rmse == ser.rmse);
    CHECK(par.se == ser.se);
    CHECK(par.naive_rmse == ser.naive_rmse);
  }
}

TEST_CASE("replicates are paired across cells") {
  const std::size_t n = 256;
  const Signal truth = test_signal("doppler", n);
  EstimatorConfig cfg;
  CellOptions opt;
  opt.reps = 4;
  const auto one = run_replicate(truth, homogeneous_channels(1, 0.3, 1.0), cfg, opt, 2);
  const auto again = run_replicate(truth, homogeneous_channels(1, 0.3, 1.0), cfg, opt, 2);
  CHECK(one.error == again.error);
  const auto other = run_replicate(truth, homogeneous_channels(1, 0.3, 1.0), cfg, opt, 3);
  CHECK(one.error != other.error);
}

TEST_CASE("antithetic summary uses pair means") {
  std::vector<ReplicateOutcome> o(4);
  o[0].error = 1.0;
  o[1].error = 3.0;
  o[2].error = 2.0;
  o[3].error = 2.0;
  const auto c = summarize(o, true);
  CHECK(c.rmse == doctest::Approx(2.0));
  CHECK(c.se == 0.0);
  const auto plain = summarize(o, false);
  CHECK(plain.se > 0.0);
}

TEST_CASE("grid determinism, output formats and trends") {
  ExperimentGrid g;
  g.signals = {"lidar"};
  g.nus = {0.3, 0.5};
  g.alphas = {1.0, 0.6};
  g.ms = {1, 2};
  g.reps = 6;
  g.n = 256;
  const auto a = run_grid(g);
  const auto b = run_grid(g);
  REQUIRE(a.cells.size() == 8);
  std::ostringstream ca, cb, md, lg;
  write_grid_csv(ca, a);
  write_grid_csv(cb, b);
  CHECK(ca.str() == cb.str());
  CHECK(ca.str().rfind("signal,nu,alpha,M,snr_db,zeta_rule,rmse,se,mean_j1\n", 0) == 0);
  std::size_t rows = 0;
  for (char ch : ca.str()) rows += ch == '\n';
  CHECK(rows == 9);
  write_grid_markdown(md, a);
  CHECK(md.str().find("| M=1 | M=2 |") != std::string::npos);
  write_grid_long(lg, a);
  rows = 0;
  for (char ch : lg.str()) rows += ch == '\n';
  CHECK(rows == 1 + 8 * 6);

  const auto trends = check_trends(a);
  // 4 M steps, 4 alpha steps, 4 nu steps.
  CHECK(trends.size() == 12);
  const GridCell* m1 = a.find(CellKey{"lidar", 0.3, 1.0, 1, 20.0, "sqrt_alpha"});
  REQUIRE(m1 != nullptr);
  CHECK(m1->error.empty());
}

TEST_CASE("paired trend decision") {
  GridCell lo, hi;
  lo.result.errors = {1.0, 1.1, 0.9, 1.0};
  hi.result.errors = {1.5, 1.6, 1.4, 1.6};
  CHECK(paired_trend("x", lo, hi).passed);
  CHECK_FALSE(paired_trend("x", hi, lo).passed);
  hi.error = "failed";
  CHECK_FALSE(paired_trend("x", lo, hi).passed);
}

TEST_CASE("grid validation") {
  ExperimentGrid g;
  g.ms.clear();
  CHECK_THROWS(g.validate());
  ExperimentGrid h;
  h.signals = {"nope"};
  CHECK_THROWS(h.validate());
  ExperimentGrid k;
  k.alphas = {1.5};
  CHECK_THROWS(k.validate());
}

TEST_CASE("rate slope regression") {
  EstimatorConfig cfg;
  cfg.sigma_source = SigmaSource::kKnown;
  CellOptions opt;
  opt.reps = 8;
  const auto s = rate_slope("smooth", homogeneous_channels(1, 0.0, 1.0), cfg, {256, 512, 1024, 2048}, opt);
  CHECK(s.slope < 0.0);
  CHECK(s.se > 0.0);
  CHECK(s.n.size() == 4);
  CHECK_THROWS(rate_slope("smooth", homogeneous_channels(1, 0.0, 1.0), cfg, {256, 512}, opt));
}

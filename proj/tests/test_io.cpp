#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "mwd/io.hpp"

using namespace mwd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mwd_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exact number formatting") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_exact(x)) == x);
  CHECK(format_exact(NAN) == "nan");
  CHECK(format_exact(-INFINITY) == "-inf");
}

TEST_CASE("signal files round trip") {
  std::mt19937 rng(1);
  std::normal_distribution<double> z;
  Signal s(64);
  for (double& v : s) v = z(rng);
  const auto p = scratch("signal.txt");
  write_signal(p, s);
  CHECK(read_signal(p) == s);

  std::ofstream(p) << "0 1.0\n2 3.0\n";
  CHECK_THROWS_AS(read_signal(p), IoError);
  std::ofstream(p) << "# header\n0 1.0\n1 abc\n";
  try {
    read_signal(p);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
}

TEST_CASE("observation CSV round trip") {
  const std::vector<Signal> ch = {{0.1, 0.2, 1e-17, -4.0}, {1.0, 2.0, 3.0, 4.5}};
  const auto p = scratch("obs.csv");
  write_observation_csv(p, ch);
  CHECK(read_observation_csv(p) == ch);
  std::ofstream(p) << "i,y1\n0,1,2\n";
  CHECK_THROWS_AS(read_observation_csv(p), IoError);
}

TEST_CASE("metadata round trip") {
  ObservationMetadata m;
  m.n = 256;
  m.seed = 99;
  m.snr_db = INFINITY;
  m.channels = {ChannelSpec{KernelSpec::boxcar(0.618), LrdSpec{0.5, 1.0, NoiseGenerator::kFgnCirculant}},
                ChannelSpec{KernelSpec::super_smooth(0.2, 1.0, 1.5), LrdSpec{1.0, 1.0, NoiseGenerator::kFarima}}};
  m.sigma = {0.0, 0.0};
  const auto p = scratch("meta.json");
  write_metadata(p, m);
  const auto r = read_metadata(p);
  CHECK(r.n == 256);
  CHECK(r.seed == 99);
  CHECK(std::isinf(r.snr_db));
  REQUIRE(r.channels.size() == 2);
  CHECK(r.channels[0].kernel.family == KernelFamily::kBoxcar);
  CHECK(r.channels[0].kernel.c == 0.618);
  CHECK(r.channels[0].lrd.generator == NoiseGenerator::kFgnCirculant);
  CHECK(r.channels[1].kernel.beta == 1.5);
  m.snr_db = 12.5;
  write_metadata(p, m);
  CHECK(read_metadata(p).snr_db == 12.5);
  std::ofstream(p) << "{\"n\": 256, \"channels\": [{\"kernel\": {\"family\": \"gauss\"}}]}";
  CHECK_THROWS_AS(read_metadata(p), IoError);
}

TEST_CASE("coefficient files round trip") {
  std::mt19937 rng(2);
  std::normal_distribution<double> z;
  WaveletCoeffs w(2, 6);
  for (double& a : w.scaling()) a = z(rng);
  for (int j = 2; j <= 6; ++j)
    for (double& b : w.detail(j)) b = z(rng);
  const auto p = scratch("coeffs.csv");
  write_coefficients(p, w);
  const auto r = read_coefficients(p);
  CHECK(r.coarse_level() == 2);
  CHECK(r.fine_level() == 6);
  for (std::size_t k = 0; k < 4; ++k) CHECK(r.scaling()[k] == w.scaling()[k]);
  for (int j = 2; j <= 6; ++j)
    for (std::size_t k = 0; k < w.detail(j).size(); ++k) CHECK(r.detail(j)[k] == w.detail(j)[k]);
  std::ofstream(p) << "kind,j,k,value\na,2,9,1.0\n";
  CHECK_THROWS_AS(read_coefficients(p), IoError);
}

TEST_CASE("diagnostics JSON") {
  EstimateDiagnostics d;
  d.j0 = 0;
  d.j1 = 2;
  d.lambda = {0.1, 0.2, 0.3};
  d.survivors = {1, 2, 3};
  d.level_size = {1, 2, 4};
  d.sigma_known = {0.5};
  d.sigma_mad = {0.48};
  const std::string s = diagnostics_json(d);
  CHECK(s.find("\"sigma_mad\"") != std::string::npos);
  CHECK(s.find("\"levels\"") != std::string::npos);
}

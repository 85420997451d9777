#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwd/bench.hpp"
#include "mwd/estimator.hpp"
#include "mwd/meyer.hpp"
#include "mwd/model.hpp"

namespace mwd {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same double ("%.17g").
std::string format_exact(double x);

/// Two columns "index value", one row per sample, '#' comments allowed.
void write_signal(const std::filesystem::path& path, std::span<const double> signal);
Signal read_signal(const std::filesystem::path& path);

/// CSV with header "i,y1,...,yM" and one row per grid point.
void write_observation_csv(const std::filesystem::path& path, const std::vector<Signal>& channels);
std::vector<Signal> read_observation_csv(const std::filesystem::path& path);

/// JSON sidecar for a stored observation: n, seed, snr_db and per-channel kernel,
/// lrd and the injected sigma.
struct ObservationMetadata {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  std::vector<ChannelSpec> channels;
  std::vector<double> sigma;
};

void write_metadata(const std::filesystem::path& path, const ObservationMetadata& meta);
ObservationMetadata read_metadata(const std::filesystem::path& path);

/// Rows "kind,j,k,value" with kind a (scaling) or d (detail); header line first.
void write_coefficients(const std::filesystem::path& path, const WaveletCoeffs& coeffs);
WaveletCoeffs read_coefficients(const std::filesystem::path& path);

/// Estimation diagnostics as JSON text.
std::string diagnostics_json(const EstimateDiagnostics& d);

}  // namespace mwd

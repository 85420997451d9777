#include "mwd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mwd {

using nlohmann::json;

std::string format_exact(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad integer '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_signal(const std::filesystem::path& path, std::span<const double> signal) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < signal.size(); ++i) out << i << ' ' << format_exact(signal[i]) << '\n';
}

Signal read_signal(const std::filesystem::path& path) {
  auto in = open_in(path);
  Signal s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string idx, value, extra;
    if (!(ss >> idx >> value) || (ss >> extra))
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 'index value'");
    if (parse_long(idx, path, lineno) != static_cast<long>(s.size()))
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": indices must run 0, 1, 2, ...");
    s.push_back(parse_double(value, path, lineno));
  }
  return s;
}

void write_observation_csv(const std::filesystem::path& path, const std::vector<Signal>& channels) {
  if (channels.empty()) throw IoError("no channels to write");
  auto out = open_out(path);
  out << 'i';
  for (std::size_t l = 0; l < channels.size(); ++l) out << ",y" << l + 1;
  out << '\n';
  for (std::size_t i = 0; i < channels.front().size(); ++i) {
    out << i;
    for (const auto& ch : channels) out << ',' << format_exact(ch.at(i));
    out << '\n';
  }
}

std::vector<Signal> read_observation_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "i") throw IoError(path.string() + ":1: expected header 'i,y1,...'");
  std::vector<Signal> channels(header.size() - 1);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                    " columns");
    for (std::size_t l = 0; l + 1 < cells.size(); ++l) channels[l].push_back(parse_double(cells[l + 1], path, lineno));
  }
  return channels;
}

namespace {

json kernel_json(const KernelSpec& k) {
  return json{{"family", std::string(to_string(k.family))}, {"nu", k.nu}, {"theta", k.theta}, {"beta", k.beta},
              {"c", k.c}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  k.family = kernel_family_from_string(j.at("family").get<std::string>());
  k.nu = j.value("nu", 0.0);
  k.theta = j.value("theta", 0.0);
  k.beta = j.value("beta", 1.0);
  k.c = j.value("c", 0.0);
  return k;
}

}  // namespace

void write_metadata(const std::filesystem::path& path, const ObservationMetadata& meta) {
  json j;
  j["n"] = meta.n;
  j["seed"] = meta.seed;
  // JSON has no infinity; a noiseless observation stores null.
  j["snr_db"] = std::isfinite(meta.snr_db) ? json(meta.snr_db) : json(nullptr);
  j["channels"] = json::array();
  for (std::size_t l = 0; l < meta.channels.size(); ++l) {
    const auto& ch = meta.channels[l];
    j["channels"].push_back(json{{"kernel", kernel_json(ch.kernel)},
                                 {"lrd", {{"alpha", ch.lrd.alpha}, {"generator", std::string(to_string(ch.lrd.generator))}}},
                                 {"sigma", meta.sigma.at(l)}});
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

ObservationMetadata read_metadata(const std::filesystem::path& path) {
  auto in = open_in(path);
  ObservationMetadata meta;
  try {
    const json j = json::parse(in);
    meta.n = j.at("n").get<std::size_t>();
    meta.seed = j.value("seed", std::uint64_t{0});
    meta.snr_db = j.contains("snr_db") && !j["snr_db"].is_null() ? j["snr_db"].get<double>()
                                                                  : std::numeric_limits<double>::infinity();
    for (const auto& c : j.at("channels")) {
      ChannelSpec ch;
      ch.kernel = kernel_from_json(c.at("kernel"));
      ch.lrd.alpha = c.at("lrd").at("alpha").get<double>();
      ch.lrd.generator = noise_generator_from_string(c.at("lrd").value("generator", std::string("farima")));
      meta.sigma.push_back(c.at("sigma").get<double>());
      ch.lrd.sigma = meta.sigma.back();
      ch.validate();
      meta.channels.push_back(ch);
    }
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (meta.channels.empty()) throw IoError(path.string() + ": no channels");
  return meta;
}

void write_coefficients(const std::filesystem::path& path, const WaveletCoeffs& coeffs) {
  auto out = open_out(path);
  out << "kind,j,k,value\n";
  const int j0 = coeffs.coarse_level();
  const auto a = coeffs.scaling();
  for (std::size_t k = 0; k < a.size(); ++k) out << "a," << j0 << ',' << k << ',' << format_exact(a[k]) << '\n';
  for (int j = j0; j <= coeffs.fine_level(); ++j) {
    const auto d = coeffs.detail(j);
    for (std::size_t k = 0; k < d.size(); ++k) out << "d," << j << ',' << k << ',' << format_exact(d[k]) << '\n';
  }
}

WaveletCoeffs read_coefficients(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "kind,j,k,value")
    throw IoError(path.string() + ":1: expected header 'kind,j,k,value'");
  struct Row {
    bool scaling;
    long j, k;
    double value;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  long j0 = -1, j1 = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4 || (cells[0] != "a" && cells[0] != "d"))
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 'a|d,j,k,value'");
    Row r{cells[0] == "a", parse_long(cells[1], path, lineno), parse_long(cells[2], path, lineno),
          parse_double(cells[3], path, lineno)};
    if (r.scaling) {
      if (j0 >= 0 && j0 != r.j) throw IoError(path.string() + ": scaling rows at more than one level");
      j0 = r.j;
    } else {
      j1 = std::max(j1, r.j);
    }
    rows.push_back(r);
  }
  if (j0 < 0) throw IoError(path.string() + ": no scaling rows");
  if (j1 < 0) j1 = j0 - 1;
  WaveletCoeffs c(static_cast<int>(j0), static_cast<int>(j1));
  for (const auto& r : rows) {
    std::span<double> target = r.scaling ? c.scaling() : c.detail(static_cast<int>(r.j));
    if (r.k < 0 || r.k >= static_cast<long>(target.size()))
      throw IoError(path.string() + ": position k = " + std::to_string(r.k) + " out of range");
    target[static_cast<std::size_t>(r.k)] = r.value;
  }
  return c;
}

std::string diagnostics_json(const EstimateDiagnostics& d) {
  json j;
  j["mode"] = std::string(to_string(d.mode));
  j["best_channel"] = d.best_channel + 1;
  j["best_channel_source"] = d.best_channel_data_driven ? "data_driven" : "theoretical";
  j["j0"] = d.j0;
  j["j1"] = d.j1;
  j["j1_theoretical"] = d.j1_theoretical;
  j["j1_per_channel"] = d.j1_per_channel;
  j["stopping_times"] = d.stopping_times;
  j["zeta"] = d.zeta;
  j["xi"] = d.xi;
  j["c_n"] = d.cn;
  json levels = json::array();
  for (std::size_t i = 0; i < d.lambda.size(); ++i)
    levels.push_back(json{{"j", d.j0 + static_cast<int>(i)},
                          {"lambda", d.lambda[i]},
                          {"survivors", d.survivors[i]},
                          {"size", d.level_size[i]}});
  j["levels"] = levels;
  j["sigma_known"] = d.sigma_known;
  j["sigma_mad"] = d.sigma_mad;
  j["sigma_used"] = d.sigma_used;
  j["dropped_frequencies"] = d.dropped_frequencies;
  j["warnings"] = d.warnings;
  return j.dump(2);
}

}  // namespace mwd

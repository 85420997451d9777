#pragma once

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwd/bench.hpp"
#include "mwd/estimator.hpp"
#include "mwd/model.hpp"

namespace mwd::cli {

/// Bad configuration; the message carries "file:line: field: problem".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigFile {
  std::filesystem::path path;
  std::string text;
  nlohmann::json root;
};

/// Reads and parses a JSON config. An empty path gives an empty object.
ConfigFile load_config(const std::filesystem::path& path);

/// A JSON object inside a config file, with field-level diagnostics.
class Section {
 public:
  Section(const ConfigFile& file, const nlohmann::json& node, std::string path = "");

  /// Rejects keys outside the allowed set.
  void only(std::initializer_list<const char*> keys) const;
  bool has(const char* key) const;
  Section child(const char* key) const;
  std::vector<Section> children(const char* key) const;

  double number(const char* key, double fallback) const;
  std::optional<double> optional_number(const char* key) const;
  long integer(const char* key, long fallback) const;
  std::optional<long> optional_integer(const char* key) const;
  bool boolean(const char* key, bool fallback) const;
  std::string string(const char* key, const std::string& fallback) const;
  std::vector<std::string> strings(const char* key, const std::vector<std::string>& fallback) const;
  std::vector<double> numbers(const char* key, const std::vector<double>& fallback) const;
  const nlohmann::json& raw(const char* key) const;

  [[noreturn]] void fail(const std::string& field, const std::string& problem) const;

 private:
  std::string field(const std::string& key) const;
  const ConfigFile* file_;
  const nlohmann::json* node_;
  std::string path_;
};

ChannelSpec parse_channel(const Section& s);
EstimatorConfig parse_estimator(const Section& s);
ExperimentGrid parse_grid(const Section& s);

}  // namespace mwd::cli

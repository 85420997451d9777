#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mwd::cli {

using nlohmann::json;

namespace {

std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Best-effort source line for a dotted field path: finds each quoted key in turn.
std::size_t line_of(const std::string& text, const std::string& path) {
  std::size_t pos = 0;
  std::size_t found = std::string::npos;
  std::string token;
  auto seek = [&](const std::string& key) {
    if (key.empty()) return;
    const std::size_t at = text.find('"' + key + '"', pos);
    if (at == std::string::npos) return;
    pos = at + key.size() + 2;
    found = at;
  };
  for (char c : path) {
    if (c == '.' || c == '[') {
      seek(token);
      token.clear();
      if (c == '[') token = "\x01";  // index marker, skipped
    } else if (c == ']') {
      token.clear();
    } else if (token != "\x01") {
      token += c;
    }
  }
  seek(token);
  return found == std::string::npos ? 0 : line_at(text, found);
}

}  // namespace

ConfigFile load_config(const std::filesystem::path& path) {
  ConfigFile f;
  f.path = path;
  if (path.empty()) {
    f.root = json::object();
    return f;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read config");
  std::stringstream ss;
  ss << in.rdbuf();
  f.text = ss.str();
  try {
    f.root = json::parse(f.text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ":" + std::to_string(line_at(f.text, e.byte > 0 ? e.byte - 1 : 0)) +
                      ": syntax error: " + e.what());
  }
  if (!f.root.is_object()) throw ConfigError(path.string() + ":1: top level must be an object");
  return f;
}

Section::Section(const ConfigFile& file, const json& node, std::string path)
    : file_(&file), node_(&node), path_(std::move(path)) {
  if (!node.is_object()) fail("", "expected an object");
}

std::string Section::field(const std::string& key) const {
  if (path_.empty()) return key;
  if (key.empty()) return path_;
  return path_ + "." + key;
}

void Section::fail(const std::string& key, const std::string& problem) const {
  const std::string f = field(key);
  const std::size_t line = file_->text.empty() ? 0 : line_of(file_->text, f);
  std::string where = file_->path.empty() ? "<config>" : file_->path.string();
  if (line) where += ":" + std::to_string(line);
  throw ConfigError(where + ": " + (f.empty() ? "" : f + ": ") + problem);
}

void Section::only(std::initializer_list<const char*> keys) const {
  for (const auto& [k, v] : node_->items()) {
    (void)v;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      std::string allowed;
      for (const char* a : keys) allowed += std::string(allowed.empty() ? "" : ", ") + a;
      fail(k, "unknown key (allowed: " + allowed + ")");
    }
  }
}

bool Section::has(const char* key) const { return node_->contains(key) && !(*node_)[key].is_null(); }

const json& Section::raw(const char* key) const { return node_->at(key); }

Section Section::child(const char* key) const {
  if (!has(key)) fail(key, "missing");
  if (!(*node_)[key].is_object()) fail(key, "expected an object");
  return Section(*file_, (*node_)[key], field(key));
}

std::vector<Section> Section::children(const char* key) const {
  if (!has(key)) fail(key, "missing");
  const json& arr = (*node_)[key];
  if (!arr.is_array() || arr.empty()) fail(key, "expected a nonempty array of objects");
  std::vector<Section> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = field(key) + "[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(std::string(key) + "[" + std::to_string(i) + "]", "expected an object");
    out.emplace_back(*file_, arr[i], p);
  }
  return out;
}

std::optional<double> Section::optional_number(const char* key) const {
  if (!has(key)) return std::nullopt;
  const json& v = (*node_)[key];
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

double Section::number(const char* key, double fallback) const { return optional_number(key).value_or(fallback); }

std::optional<long> Section::optional_integer(const char* key) const {
  if (!has(key)) return std::nullopt;
  const json& v = (*node_)[key];
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<long>();
}

long Section::integer(const char* key, long fallback) const { return optional_integer(key).value_or(fallback); }

bool Section::boolean(const char* key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = (*node_)[key];
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

std::string Section::string(const char* key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const json& v = (*node_)[key];
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> Section::strings(const char* key, const std::vector<std::string>& fallback) const {
  if (!has(key)) return fallback;
  const json& v = (*node_)[key];
  if (!v.is_array()) fail(key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) fail(key, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> Section::numbers(const char* key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  const json& v = (*node_)[key];
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

ChannelSpec parse_channel(const Section& s) {
  s.only({"kernel", "lrd"});
  ChannelSpec ch;
  const Section k = s.child("kernel");
  k.only({"family", "nu", "theta", "beta", "c"});
  try {
    ch.kernel.family = kernel_family_from_string(k.string("family", "direct"));
  } catch (const std::exception& e) {
    k.fail("family", e.what());
  }
  ch.kernel.nu = k.number("nu", 0.0);
  ch.kernel.theta = k.number("theta", 0.0);
  ch.kernel.beta = k.number("beta", 1.0);
  ch.kernel.c = k.number("c", 0.0);
  try {
    ch.kernel.validate();
  } catch (const std::exception& e) {
    k.fail("", e.what());
  }
  if (s.has("lrd")) {
    const Section l = s.child("lrd");
    l.only({"alpha", "sigma", "generator"});
    ch.lrd.alpha = l.number("alpha", 1.0);
    ch.lrd.sigma = l.number("sigma", 1.0);
    try {
      ch.lrd.generator = noise_generator_from_string(l.string("generator", "farima"));
      ch.lrd.validate();
    } catch (const std::exception& e) {
      l.fail("", e.what());
    }
  }
  return ch;
}

EstimatorConfig parse_estimator(const Section& s) {
  s.only({"mode", "zeta_rule", "zeta", "p", "j0", "j1", "scale_rule", "sigma_source", "epsilon",
          "strict_degenerate", "probe_seed"});
  EstimatorConfig c;
  auto parse = [&](const char* key, auto fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      s.fail(key, e.what());
    }
  };
  if (s.has("mode")) parse("mode", [&] { c.mode = estimator_mode_from_string(s.string("mode", "")); });
  if (s.has("zeta_rule")) parse("zeta_rule", [&] { c.zeta_rule = zeta_rule_from_string(s.string("zeta_rule", "")); });
  if (s.has("zeta")) {
    c.zeta = s.number("zeta", 1.0);
    if (!s.has("zeta_rule")) c.zeta_rule = ZetaRule::kFixed;
  }
  c.p = s.number("p", c.p);
  if (auto j0 = s.optional_integer("j0")) c.j0 = static_cast<int>(*j0);
  if (auto j1 = s.optional_integer("j1")) c.j1 = static_cast<int>(*j1);
  if (s.has("scale_rule"))
    parse("scale_rule", [&] { c.scale_rule = scale_rule_from_string(s.string("scale_rule", "")); });
  if (s.has("sigma_source"))
    parse("sigma_source", [&] { c.sigma_source = sigma_source_from_string(s.string("sigma_source", "")); });
  c.epsilon = s.number("epsilon", c.epsilon);
  c.strict_degenerate = s.boolean("strict_degenerate", false);
  c.probe_seed = static_cast<std::uint64_t>(s.integer("probe_seed", 0));
  parse("", [&] { c.validate(); });
  return c;
}

ExperimentGrid parse_grid(const Section& s) {
  s.only({"signals", "nus", "alphas", "ms", "snr_dbs", "zetas", "reps", "n", "seed", "generator", "sigma_source",
          "scale_rule", "antithetic"});
  ExperimentGrid g;
  g.signals = s.strings("signals", g.signals);
  g.nus = s.numbers("nus", g.nus);
  g.alphas = s.numbers("alphas", g.alphas);
  if (s.has("ms")) {
    g.ms.clear();
    for (double m : s.numbers("ms", {})) {
      if (!(m >= 1.0) || m != std::floor(m)) s.fail("ms", "channel counts must be positive integers");
      g.ms.push_back(static_cast<std::size_t>(m));
    }
  }
  g.snr_dbs = s.numbers("snr_dbs", g.snr_dbs);
  if (s.has("zetas")) {
    g.zetas.clear();
    const auto& arr = s.raw("zetas");
    if (!arr.is_array()) s.fail("zetas", "expected an array");
    for (const auto& z : arr) {
      if (z.is_number()) {
        g.zetas.push_back(ZetaChoice{ZetaRule::kFixed, z.get<double>()});
      } else if (z.is_string()) {
        try {
          g.zetas.push_back(ZetaChoice{zeta_rule_from_string(z.get<std::string>()), 1.0});
        } catch (const std::exception& e) {
          s.fail("zetas", e.what());
        }
      } else {
        s.fail("zetas", "entries must be rule names or numbers");
      }
    }
  }
  const long reps = s.integer("reps", static_cast<long>(g.reps));
  const long n = s.integer("n", static_cast<long>(g.n));
  if (reps < 1) s.fail("reps", "must be at least 1");
  if (n < 16) s.fail("n", "must be a power of two >= 16");
  g.reps = static_cast<std::size_t>(reps);
  g.n = static_cast<std::size_t>(n);
  g.master_seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long>(g.master_seed)));
  try {
    g.generator = noise_generator_from_string(s.string("generator", std::string(to_string(g.generator))));
    g.sigma_source = sigma_source_from_string(s.string("sigma_source", std::string(to_string(g.sigma_source))));
    g.scale_rule = scale_rule_from_string(s.string("scale_rule", std::string(to_string(g.scale_rule))));
  } catch (const std::exception& e) {
    s.fail("", e.what());
  }
  g.antithetic = s.boolean("antithetic", false);
  try {
    g.validate();
  } catch (const std::exception& e) {
    s.fail("", e.what());
  }
  return g;
}

}  // namespace mwd::cli

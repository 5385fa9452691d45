#include "drops/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drops/errors.hpp"

namespace drops {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& command_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"capacity", {"alpha", "dim", "nodes", "radius", "shape_file"}},
      {"equilibrium", {"alpha", "dim", "nodes", "radius", "shape_file", "family"}},
      {"functional", {"alpha", "dim", "nodes", "charge", "shape_file"}},
      {"nonexistence", {"alpha", "dim", "charge", "mass", "beta", "n_list"}},
      {"splitting", {"alpha", "dim", "charge", "delta"}},
      {"stability",
       {"delta", "nodes", "charges", "modes", "amplitudes"}},
      {"corner", {"side", "nodes"}},
      {"logchecks", {"radius", "separations", "lambdas"}},
  };
  return keys;
}

}  // namespace

double RunConfig::param_real(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return (it == params.end()) ? fallback : parse_real(key, it->second);
}

int RunConfig::param_int(const std::string& key, int fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double x = parse_real(key, it->second);
  const int n = static_cast<int>(x);
  if (static_cast<double>(n) != x)
    throw ConfigError("expected an integer for '" + key + "': " + it->second);
  return n;
}

std::vector<double> RunConfig::param_real_list(
    const std::string& key, const std::vector<double>& fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(it->second))
    out.push_back(parse_real(key, item));
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

std::vector<int> RunConfig::param_int_list(const std::string& key,
                                           const std::vector<int>& fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<int> out;
  for (const std::string& item : split_list(it->second)) {
    const double x = parse_real(key, item);
    const int n = static_cast<int>(x);
    if (static_cast<double>(n) != x)
      throw ConfigError("expected integers for '" + key + "': " + item);
    out.push_back(n);
  }
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void validate_config_keys(const RunConfig& config) {
  const auto& table = command_keys();
  const auto it = table.find(config.command);
  if (it == table.end()) {
    std::string known;
    for (const auto& [cmd, keys] : table) {
      if (!known.empty()) known += ", ";
      known += cmd;
    }
    throw ConfigError("unknown command '" + config.command + "' (known: " + known + ")");
  }
  for (const auto& [key, value] : config.params) {
    if (!it->second.contains(key))
      throw ConfigError("unknown key '" + key + "' for command '" +
                        config.command + "'");
  }
}

RunConfig resolve_config(const std::map<std::string, std::string>& file_params,
                         const std::map<std::string, std::string>& overrides) {
  RunConfig config;
  auto apply = [&](const std::map<std::string, std::string>& src) {
    for (const auto& [key, value] : src) {
      if (key == "command") {
        config.command = value;
      } else if (key == "out") {
        config.output_dir = value;
      } else if (key == "seed") {
        config.seed = static_cast<unsigned>(parse_real("seed", value));
      } else if (key == "threads") {
        config.threads = static_cast<int>(parse_real("threads", value));
      } else if (key == "tol") {
        config.tol = parse_real("tol", value);
        if (config.tol <= 0.0) throw ConfigError("tol must be positive");
      } else {
        config.params[key] = value;
      }
    }
  };
  apply(file_params);
  apply(overrides);
  if (config.command.empty()) throw ConfigError("no command given");
  validate_config_keys(config);
  return config;
}

std::string config_json(const RunConfig& config) {
  nlohmann::json j;
  j["version"] = kArtifactVersion;
  j["command"] = config.command;
  j["output_dir"] = config.output_dir;
  j["seed"] = config.seed;
  j["threads"] = config.threads;
  j["tol"] = config.tol;
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [key, value] : config.params) p[key] = value;
  j["params"] = p;
  return j.dump(2);
}

}  // namespace drops

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drops {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Resolved run configuration: CLI flag > config file > default.
struct RunConfig {
  std::string command;                 // capacity, equilibrium, functional,
                                       // nonexistence, splitting, stability,
                                       // corner, logchecks
  std::string output_dir = "out";
  unsigned seed = 0;
  int threads = 0;                     // 0 = hardware count
  double tol = 1e-6;
  std::map<std::string, std::string> params;

  double param_real(const std::string& key, double fallback) const;
  int param_int(const std::string& key, int fallback) const;
  std::vector<double> param_real_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<int> param_int_list(const std::string& key,
                                  const std::vector<int>& fallback) const;
};

// Parse `key = value` lines (comments start with '#'); unknown keys are
// rejected with the offending key named.
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

// Validate keys against the known set for the command; throws ConfigError
// naming the first unknown key.
void validate_config_keys(const RunConfig& config);

// Merge: defaults <- file params <- overrides.
RunConfig resolve_config(const std::map<std::string, std::string>& file_params,
                         const std::map<std::string, std::string>& overrides);

std::string config_json(const RunConfig& config);

}  // namespace drops

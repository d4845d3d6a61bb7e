#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "firmdyn/calibration.hpp"
#include "firmdyn/equilibrium.hpp"

namespace firmdyn {

/// Everything a CLI run needs. Parsed from flat `key = value` text; `#`
/// starts a comment. Unknown keys and malformed values raise ConfigError.
struct RunConfig {
  ModelParams params = ModelParams::defaults();
  CalibrationTargets targets;
  std::string variant_name = "baseline";
  int irf_horizon = 40;
  int summary_horizon = 4000;
  double real_rate_impact = 0.01;
  int decomposition_horizon = 200;
  std::vector<int> distribution_horizons{0, 4, 8, 20};
  std::vector<double> sweep_nu{0.1, 0.3, 0.5, 0.7, 0.9};
  double calibration_tol = 1e-10;
  double re_tol = 1e-12;
  int re_max_iter = 100000;
  std::filesystem::path output_dir = "out";

  void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Model-parameter keys in canonical order, shortest round-trip digits, so
/// the text parses back to bitwise-identical parameters.
std::string params_to_config(const ModelParams& params);

/// Recognised keys with one-line descriptions.
const std::map<std::string, std::string>& config_keys();

}  // namespace firmdyn

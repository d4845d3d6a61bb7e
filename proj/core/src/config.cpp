#include "firmdyn/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <string_view>

#include "firmdyn/errors.hpp"
#include "firmdyn/io.hpp"

namespace firmdyn {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(const std::string& key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + std::string(v) + "'");
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, std::string_view v, F convert) {
  std::vector<T> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const std::string_view item = trim(v.substr(0, comma));
    if (item.empty()) {
      throw ConfigError("config: '" + key + "' has an empty list entry");
    }
    out.push_back(convert(key, item));
    v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
  }
  if (out.empty()) {
    throw ConfigError("config: '" + key + "' expects a comma-separated list");
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

struct KeySpec {
  std::string description;
  Setter set;
};

Setter number(double ModelParams::*field) {
  return [field](RunConfig& c, const std::string& k, std::string_view v) { c.params.*field = to_double(k, v); };
}

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = [] {
    std::map<std::string, KeySpec> t;
    t["beta"] = {"household discount factor", number(&ModelParams::beta)};
    t["sigma"] = {"inverse intertemporal elasticity of substitution", number(&ModelParams::sigma)};
    t["kappa0"] = {"labour disutility scale", number(&ModelParams::kappa0)};
    t["kappa1"] = {"inverse Frisch elasticity", number(&ModelParams::kappa1)};
    t["nu"] = {"returns to scale of production firms", number(&ModelParams::nu)};
    t["gamma"] = {"elasticity of substitution across intermediate goods", number(&ModelParams::gamma)};
    t["xi"] = {"Rotemberg price-adjustment cost", number(&ModelParams::xi)};
    t["phi"] = {"Taylor-rule response to inflation", number(&ModelParams::phi)};
    t["rho_m"] = {"persistence of the monetary policy shock", number(&ModelParams::rho_m)};
    t["entrant_mass"] = {"mass of potential entrants M", number(&ModelParams::entrant_mass)};
    t["grid_size"] = {"number of productivity grid points k",
                      [](RunConfig& c, const std::string& k, std::string_view v) { c.params.grid_size = to_int(k, v); }};
    t["rho_z"] = {"quarterly persistence of log productivity", [](RunConfig& c, const std::string& k, std::string_view v) {
                    c.params.productivity.persistence = to_double(k, v);
                  }};
    t["sigma_z"] = {"innovation std of log productivity", [](RunConfig& c, const std::string& k, std::string_view v) {
                      c.params.productivity.innovation_sd = to_double(k, v);
                    }};
    t["a_z"] = {"mean of log productivity", [](RunConfig& c, const std::string& k, std::string_view v) {
                  c.params.productivity.mean = to_double(k, v);
                }};
    t["mu_c"] = {"log-location of the operating cost", [](RunConfig& c, const std::string& k, std::string_view v) {
                   c.params.operating_cost.location = to_double(k, v);
                 }};
    t["sigma_c"] = {"log-scale of the operating cost", [](RunConfig& c, const std::string& k, std::string_view v) {
                      c.params.operating_cost.scale = to_double(k, v);
                    }};
    t["mu_e"] = {"log-location of the entry cost", [](RunConfig& c, const std::string& k, std::string_view v) {
                   c.params.entry_cost.location = to_double(k, v);
                 }};
    t["sigma_e"] = {"log-scale of the entry cost", [](RunConfig& c, const std::string& k, std::string_view v) {
                      c.params.entry_cost.scale = to_double(k, v);
                    }};
    t["vfi_tol"] = {"sup-norm tolerance of value function iteration", number(&ModelParams::vfi_tol)};
    t["vfi_max_iter"] = {"iteration cap of value function iteration",
                         [](RunConfig& c, const std::string& k, std::string_view v) {
                           c.params.vfi_max_iter = to_int(k, v);
                         }};

    t["target_exit_rate"] = {"calibration target: annual exit rate",
                             [](RunConfig& c, const std::string& k, std::string_view v) {
                               c.targets.annual_exit_rate = to_double(k, v);
                             }};
    t["target_incumbent_size"] = {"calibration target: average incumbent size",
                                  [](RunConfig& c, const std::string& k, std::string_view v) {
                                    c.targets.avg_incumbent_size = to_double(k, v);
                                  }};
    t["target_exiting_size"] = {"calibration target: average exiting-firm size",
                                [](RunConfig& c, const std::string& k, std::string_view v) {
                                  c.targets.avg_exiting_size = to_double(k, v);
                                }};
    t["target_employment"] = {"calibration target: employment-to-population ratio",
                              [](RunConfig& c, const std::string& k, std::string_view v) {
                                c.targets.employment = to_double(k, v);
                              }};

    t["variant"] = {"named variant preset, applied before the individual variant keys",
                    [](RunConfig& c, const std::string&, std::string_view v) {
                      c.variant_name = std::string(v);
                      c.params.variant = variant_by_name(v);
                    }};
    t["denomination"] = {"cost units: final_good, labor or production_good",
                         [](RunConfig& c, const std::string&, std::string_view v) {
                           c.params.variant.denomination = parse_denomination(v);
                         }};
    t["delayed_entry"] = {"entrants start producing one period after deciding",
                          [](RunConfig& c, const std::string& k, std::string_view v) {
                            c.params.variant.delayed_entry = to_bool(k, v);
                          }};
    t["risk_neutral"] = {"firms discount with beta", [](RunConfig& c, const std::string& k, std::string_view v) {
                           c.params.variant.risk_neutral = to_bool(k, v);
                         }};
    t["alpha_c"] = {"operating-cost location shift per unit real-rate gap",
                    [](RunConfig& c, const std::string& k, std::string_view v) {
                      c.params.variant.alpha_c = to_double(k, v);
                    }};
    t["alpha_e"] = {"entry-cost location shift per unit real-rate gap",
                    [](RunConfig& c, const std::string& k, std::string_view v) {
                      c.params.variant.alpha_e = to_double(k, v);
                    }};
    t["free_entry"] = {"free entry with a congestion cost", [](RunConfig& c, const std::string& k, std::string_view v) {
                         c.params.variant.free_entry.enabled = to_bool(k, v);
                       }};
    t["free_entry_alpha"] = {"slope of the free-entry cost schedule",
                             [](RunConfig& c, const std::string& k, std::string_view v) {
                               c.params.variant.free_entry.alpha = to_double(k, v);
                             }};
    t["free_entry_e_tilde"] = {"free-entry cost at the stationary entrant mass (0 = solve)",
                               [](RunConfig& c, const std::string& k, std::string_view v) {
                                 c.params.variant.free_entry.e_tilde = to_double(k, v);
                               }};

    t["irf_horizon"] = {"last horizon written to IRF files", [](RunConfig& c, const std::string& k, std::string_view v) {
                          c.irf_horizon = to_int(k, v);
                        }};
    t["summary_horizon"] = {"horizon used for autocorrelation summaries",
                            [](RunConfig& c, const std::string& k, std::string_view v) {
                              c.summary_horizon = to_int(k, v);
                            }};
    t["real_rate_impact"] = {"impact real-rate response, quarterly log units",
                             [](RunConfig& c, const std::string& k, std::string_view v) {
                               c.real_rate_impact = to_double(k, v);
                             }};
    t["decomposition_horizon"] = {"perfect-foresight horizon of the price decomposition",
                                  [](RunConfig& c, const std::string& k, std::string_view v) {
                                    c.decomposition_horizon = to_int(k, v);
                                  }};
    t["distribution_horizons"] = {"horizons of the distribution-shift output",
                                  [](RunConfig& c, const std::string& k, std::string_view v) {
                                    c.distribution_horizons = to_list<int>(k, v, to_int);
                                  }};
    t["sweep_nu"] = {"returns-to-scale values for the sweep command",
                     [](RunConfig& c, const std::string& k, std::string_view v) {
                       c.sweep_nu = to_list<double>(k, v, to_double);
                     }};
    t["calibration_tol"] = {"max relative moment residual accepted by calibration",
                            [](RunConfig& c, const std::string& k, std::string_view v) {
                              c.calibration_tol = to_double(k, v);
                            }};
    t["re_tol"] = {"time-iteration tolerance of the linear solver",
                   [](RunConfig& c, const std::string& k, std::string_view v) { c.re_tol = to_double(k, v); }};
    t["re_max_iter"] = {"time-iteration cap of the linear solver",
                        [](RunConfig& c, const std::string& k, std::string_view v) { c.re_max_iter = to_int(k, v); }};
    t["output_dir"] = {"directory for output files",
                       [](RunConfig& c, const std::string&, std::string_view v) { c.output_dir = std::string(v); }};
    return t;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  targets.validate();
  if (irf_horizon < 1 || summary_horizon < 8) {
    throw ConfigError("config: irf_horizon must be >= 1 and summary_horizon >= 8");
  }
  if (decomposition_horizon < 1) {
    throw ConfigError("config: decomposition_horizon must be >= 1");
  }
  for (int h : distribution_horizons) {
    if (h < 0 || h > decomposition_horizon) {
      throw ConfigError("config: distribution_horizons must lie in [0, decomposition_horizon]");
    }
  }
  for (double nu : sweep_nu) {
    if (!(nu > 0.0 && nu < 1.0)) {
      throw ConfigError("config: sweep_nu values must lie in (0,1)");
    }
  }
  if (!std::isfinite(real_rate_impact)) {
    throw ConfigError("config: real_rate_impact must be finite");
  }
  if (!(calibration_tol > 0.0) || !(re_tol > 0.0) || re_max_iter < 1) {
    throw ConfigError("config: solver tolerances must be positive");
  }
  if (output_dir.empty()) {
    throw ConfigError("config: output_dir must not be empty");
  }
}

RunConfig parse_config(const std::string& text) {
  const auto& table = key_table();
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!table.contains(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": '" + key + "' has no value");
    }
    if (seen.contains(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
    }
    seen[key] = lineno;
    entries.emplace_back(key, value);
  }

  RunConfig cfg;
  // The preset first, so individual variant keys refine it regardless of order.
  for (const auto& [k, v] : entries) {
    if (k == "variant") table.at(k).set(cfg, k, v);
  }
  for (const auto& [k, v] : entries) {
    if (k != "variant") table.at(k).set(cfg, k, v);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(text);
}

std::string params_to_config(const ModelParams& p) {
  std::ostringstream out;
  auto kv = [&](const char* k, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out << k << " = " << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  };
  kv("beta", p.beta);
  kv("sigma", p.sigma);
  kv("kappa0", p.kappa0);
  kv("kappa1", p.kappa1);
  kv("nu", p.nu);
  kv("gamma", p.gamma);
  kv("xi", p.xi);
  kv("phi", p.phi);
  kv("rho_m", p.rho_m);
  kv("entrant_mass", p.entrant_mass);
  out << "grid_size = " << p.grid_size << '\n';
  kv("rho_z", p.productivity.persistence);
  kv("sigma_z", p.productivity.innovation_sd);
  kv("a_z", p.productivity.mean);
  kv("mu_c", p.operating_cost.location);
  kv("sigma_c", p.operating_cost.scale);
  kv("mu_e", p.entry_cost.location);
  kv("sigma_e", p.entry_cost.scale);
  return out.str();
}

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys = [] {
    std::map<std::string, std::string> out;
    for (const auto& [k, spec] : key_table()) {
      out[k] = spec.description;
    }
    return out;
  }();
  return keys;
}

}  // namespace firmdyn

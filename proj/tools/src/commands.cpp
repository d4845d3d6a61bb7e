#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "firmdyn/analysis.hpp"
#include "firmdyn/calibration.hpp"
#include "firmdyn/dynamics.hpp"
#include "firmdyn/errors.hpp"
#include "firmdyn/io.hpp"
#include "firmdyn/rfmodel.hpp"
#include "firmdyn/variants.hpp"

namespace firmdyn::cli {

namespace {

std::string num(double v) { return format_number(v); }

std::string num(int v) { return std::to_string(v); }

void report(const std::vector<std::filesystem::path>& written) {
  for (const auto& p : written) {
    std::printf("wrote %s\n", p.string().c_str());
  }
}

IrfOptions irf_options(const RunConfig& cfg, int horizon) {
  IrfOptions o;
  o.horizon = horizon;
  o.summary_horizon = std::max(cfg.summary_horizon, horizon);
  o.normalization.kind = Normalization::Kind::real_rate;
  o.normalization.target = cfg.real_rate_impact;
  return o;
}

LinearReOptions re_options(const RunConfig& cfg) {
  LinearReOptions o;
  o.tol = cfg.re_tol;
  o.max_iter = cfg.re_max_iter;
  return o;
}

IrfSet hf_response(const SteadyState& ss, const RunConfig& cfg, int horizon) {
  const HfModel hf = solve_hf(ss, re_options(cfg));
  return impulse_response(hf.system, hf.solution, irf_options(cfg, horizon));
}

IrfSet rf_response(const ModelParams& params, const RunConfig& cfg, int horizon) {
  return rf_irf(solve_rf(RFParams::from(params)), irf_options(cfg, horizon));
}

const char* unit_of(const std::string& column) {
  if (column == "entry_rate_bp" || column == "exit_rate_bp") return "basis points";
  return "percent log deviation";
}

const char* describe(const std::string& column) {
  static const std::map<std::string, const char*> text{
      {"output", "final output Y"},
      {"consumption", "consumption C"},
      {"employment", "hours N"},
      {"real_wage", "real wage w"},
      {"rel_price", "relative price of the production good p"},
      {"inflation", "gross inflation Pi"},
      {"nominal_rate", "gross nominal rate R"},
      {"real_rate", "ex ante real rate R/E Pi'"},
      {"entry_rate_bp", "entrants over average firm mass"},
      {"exit_rate_bp", "exiting firms over average firm mass"},
      {"gamma", "mass of operating firms"},
      {"tfp", "aggregate TFP A"},
      {"dividends", "dividends D"},
  };
  const auto it = text.find(column);
  return it == text.end() ? "" : it->second;
}

std::string irf_csv(const IrfSet& irf, const std::string& variant) {
  std::vector<std::string> header{"horizon", "model", "variant"};
  header.insert(header.end(), irf.columns.begin(), irf.columns.end());
  CsvTable t(header);
  for (Eigen::Index h = 0; h < irf.data.rows(); ++h) {
    std::vector<std::string> row{num(static_cast<int>(h)), irf.model, variant};
    for (Eigen::Index c = 0; c < irf.data.cols(); ++c) {
      row.push_back(num(irf.data(h, c)));
    }
    t.add_row(std::move(row));
  }
  return t.str();
}

std::string summary_csv(const IrfSet& irf, const std::string& variant) {
  CsvTable t({"model", "variant", "series", "impact", "peak", "peak_horizon", "autocorr4"});
  for (const auto& c : irf.columns) {
    const SeriesSummary& s = irf.summary.at(c);
    t.add_row({irf.model, variant, c, num(s.impact), num(s.peak), num(s.peak_horizon), num(s.autocorr4)});
  }
  return t.str();
}

std::string units_csv(const IrfSet& irf) {
  CsvTable t({"column", "unit", "description"});
  t.add_row({"horizon", "quarters", "periods after the shock"});
  t.add_row({"model", "label", "hf or rf"});
  t.add_row({"variant", "label", "model variant"});
  for (const auto& c : irf.columns) {
    t.add_row({c, unit_of(c), describe(c)});
  }
  return t.str();
}

std::string moments_csv(const CalibrationTargets& targets, const Moments& m) {
  CsvTable t({"moment", "target", "achieved", "relative_error"});
  auto row = [&](const char* name, double target, double achieved) {
    t.add_row({name, num(target), num(achieved), num(achieved / target - 1.0)});
  };
  row("annual_exit_rate", targets.annual_exit_rate, m.annual_exit_rate);
  row("avg_incumbent_size", targets.avg_incumbent_size, m.avg_incumbent_size);
  row("avg_exiting_size", targets.avg_exiting_size, m.avg_exiting_size);
  row("employment", targets.employment, m.employment);
  return t.str();
}

double max_relative_error(const CalibrationTargets& targets, const Moments& m) {
  return std::max({std::abs(m.annual_exit_rate / targets.annual_exit_rate - 1.0),
                   std::abs(m.avg_incumbent_size / targets.avg_incumbent_size - 1.0),
                   std::abs(m.avg_exiting_size / targets.avg_exiting_size - 1.0),
                   std::abs(m.employment / targets.employment - 1.0)});
}

std::string targets_config(const CalibrationTargets& t) {
  std::ostringstream out;
  out << "target_exit_rate = " << num(t.annual_exit_rate) << '\n'
      << "target_incumbent_size = " << num(t.avg_incumbent_size) << '\n'
      << "target_exiting_size = " << num(t.avg_exiting_size) << '\n'
      << "target_employment = " << num(t.employment) << '\n';
  return out.str();
}

// Named preset; the free-entry schedule parameters still come from the config.
VariantConfig named_variant(const RunConfig& cfg, const std::string& name) {
  VariantConfig v = variant_by_name(name);
  if (v.free_entry.enabled) {
    v.free_entry.alpha = cfg.params.variant.free_entry.alpha;
    v.free_entry.e_tilde = cfg.params.variant.free_entry.e_tilde;
  }
  return v;
}

}  // namespace

RunConfig resolve(const Common& common) {
  RunConfig cfg = load_config(common.config_path);
  if (common.output_dir) {
    cfg.output_dir = *common.output_dir;
  } else if (const char* env = std::getenv("FIRMDYN_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  }
  return cfg;
}

int cmd_calibrate(const Common& common, bool check) {
  const RunConfig cfg = resolve(common);
  if (check) {
    const SteadyState ss = solve_stationary_equilibrium(cfg.params);
    const Moments m = moments_of(ss.agg);
    std::fputs(moments_csv(cfg.targets, m).c_str(), stdout);
    const double err = max_relative_error(cfg.targets, m);
    std::printf("max_relative_error,%s\n", num(err).c_str());
    if (err > 1e-6) {
      throw ConvergenceError("calibration check: moments miss the targets by " + num(err) + " relative");
    }
    return 0;
  }
  const CalibrationResult res = calibrate(cfg.targets, cfg.params, cfg.calibration_tol);
  const SteadyState ss = solve_stationary_equilibrium(res.params);
  OutputBatch out(cfg.output_dir);
  out.add("calibrated.cfg", params_to_config(res.params) + targets_config(cfg.targets));
  out.add("calibration_moments.csv", moments_csv(cfg.targets, moments_of(ss.agg)));
  report(out.commit());
  std::printf("evaluations %d, max relative residual %s\n", res.evaluations, num(res.max_relative_residual).c_str());
  return 0;
}

int cmd_steady(const Common& common) {
  const RunConfig cfg = resolve(common);
  const SteadyState ss = variant_steady_state(cfg.params, cfg.params.variant, cfg.targets);
  const Aggregates& a = ss.agg;

  const std::vector<std::pair<const char*, double>> rows{
      {"real_wage", ss.prices.w},
      {"rel_price", ss.prices.p},
      {"nominal_rate", ss.nominal_rate},
      {"inflation", ss.inflation},
      {"output", a.output},
      {"employment", a.employment},
      {"consumption", a.consumption},
      {"firm_mass", a.firm_mass},
      {"entrant_mass", a.entrant_mass},
      {"potential_entrants", ss.params.entrant_mass},
      {"kappa0", ss.params.kappa0},
      {"tfp", a.tfp},
      {"dividends", a.dividends},
      {"transfers", a.transfers},
      {"firm_profit", a.firm_profit},
      {"intermediate_profit", a.intermediate_profit},
      {"exit_rate_quarterly", a.exit_rate_quarterly},
      {"exit_rate_annual", a.exit_rate_annual},
      {"entry_rate", a.entry_rate},
      {"avg_incumbent_size", a.avg_incumbent_size},
      {"avg_exiting_size", a.avg_exiting_size},
      {"labor_supply_residual", ss.labor_supply_residual},
      {"goods_residual", ss.goods_residual},
  };
  CsvTable steady({"variant", "quantity", "value"});
  std::ostringstream text;
  text << "stationary equilibrium (" << cfg.variant_name << ")\n";
  for (const auto& [name, value] : rows) {
    steady.add_row({cfg.variant_name, name, num(value)});
    char line[96];
    std::snprintf(line, sizeof line, "  %-24s %s\n", name, num(value).c_str());
    text << line;
  }

  const ProbabilityProfiles prof = probability_profiles(ss);
  CsvTable fig4({"variant", "log_z", "scenario", "exit_prob", "entry_prob"});
  for (Eigen::Index i = 0; i < prof.log_z.size(); ++i) {
    for (std::size_t s = 0; s < prof.scenarios.size(); ++s) {
      const auto c = static_cast<Eigen::Index>(s);
      fig4.add_row({cfg.variant_name, num(prof.log_z(i)), prof.scenarios[s], num(prof.exit_prob(i, c)),
                    num(prof.entry_prob(i, c))});
    }
  }

  const SizeProfile size = size_profile(ss);
  CsvTable fig5({"variant", "size_lower", "size_upper", "firm_share", "employment_share", "entry_rate", "exit_rate"});
  for (std::size_t i = 0; i < size.lower.size(); ++i) {
    const std::string upper = i + 1 < size.lower.size() ? num(size.lower[i + 1]) : "inf";
    fig5.add_row({cfg.variant_name, num(size.lower[i]), upper, num(size.firm_share[i]), num(size.employment_share[i]),
                  num(size.entry_rate[i]), num(size.exit_rate[i])});
  }

  OutputBatch out(cfg.output_dir);
  out.add("steady_state.txt", text.str());
  out.add("steady_state.csv", steady.str());
  out.add("fig4_profiles.csv", fig4.str());
  out.add("fig5_size_profile.csv", fig5.str());
  report(out.commit());
  return 0;
}

int cmd_irf(const Common& common, const std::string& model, const std::string& variant) {
  RunConfig cfg = resolve(common);
  if (model != "hf" && model != "rf") {
    throw ConfigError("--model must be hf or rf, got '" + model + "'");
  }
  if (!variant.empty()) {
    cfg.params.variant = named_variant(cfg, variant);
    cfg.variant_name = variant;
  }
  IrfSet irf;
  if (model == "hf") {
    const SteadyState ss = variant_steady_state(cfg.params, cfg.params.variant, cfg.targets);
    irf = hf_response(ss, cfg, cfg.irf_horizon);
  } else {
    irf = rf_response(cfg.params, cfg, cfg.irf_horizon);
  }
  const std::string tag = cfg.variant_name == "baseline" ? "irf_" + model : "irf_" + model + "_" + cfg.variant_name;
  OutputBatch out(cfg.output_dir);
  out.add(tag + ".csv", irf_csv(irf, cfg.variant_name));
  out.add(tag + "_summary.csv", summary_csv(irf, cfg.variant_name));
  out.add(tag + "_units.csv", units_csv(irf));
  report(out.commit());
  return 0;
}

int cmd_decompose(const Common& common) {
  const RunConfig cfg = resolve(common);
  const SteadyState ss = variant_steady_state(cfg.params, cfg.params.variant, cfg.targets);
  const int T = cfg.decomposition_horizon;
  const IrfSet hf = hf_response(ss, cfg, T);
  const IrfSet rf = rf_response(ss.params, cfg, T);
  const int H = std::min(cfg.irf_horizon, T - 1);

  const std::vector<Contribution> contrib = price_contributions(hf, ss);
  CsvTable fig6({"horizon", "channel", "exit_bp", "entry_bp"});
  for (int h = 0; h <= H; ++h) {
    for (const Contribution& c : contrib) {
      fig6.add_row({num(h), c.channel, num(c.exit_bp(h)), num(c.entry_bp(h))});
    }
  }

  const EmploymentGap gap = employment_gap_rf_prices(rf, hf, ss);
  CsvTable fig7({"horizon", "rf_prices_gap", "equilibrium_gap"});
  for (int h = 0; h <= H; ++h) {
    fig7.add_row({num(h), num(gap.rf_prices_gap(h)), num(gap.equilibrium_gap(h))});
  }

  const Eigen::MatrixXd shift = distribution_shift(irf_measures(hf), ss.measure.mass, cfg.distribution_horizons);
  CsvTable fig8({"horizon", "log_z", "delta_share"});
  for (std::size_t j = 0; j < cfg.distribution_horizons.size(); ++j) {
    for (Eigen::Index i = 0; i < shift.rows(); ++i) {
      fig8.add_row({num(cfg.distribution_horizons[j]), num(ss.chain.log_grid(i)),
                    num(shift(i, static_cast<Eigen::Index>(j)))});
    }
  }

  OutputBatch out(cfg.output_dir);
  out.add("fig6_contributions.csv", fig6.str());
  out.add("fig7_gaps.csv", fig7.str());
  out.add("fig8_distshift.csv", fig8.str());
  report(out.commit());
  return 0;
}

int cmd_variant(const Common& common, const std::string& only) {
  const RunConfig cfg = resolve(common);
  const std::vector<std::string> names{"baseline",     "labor_costs", "production_costs", "delayed_entry",
                                       "risk_neutral", "free_entry",  "interest_sensitive"};
  if (!only.empty() && std::find(names.begin(), names.end(), only) == names.end()) {
    throw ConfigError("unknown variant '" + only + "'");
  }
  CsvTable t({"variant", "exit_bp", "entry_bp", "output_hf", "output_rf", "output_gap_pp", "tfp", "alpha_c",
              "alpha_e"});
  auto add = [&](const std::string& name, const SteadyState& ss) {
    const IrfSet hf = hf_response(ss, cfg, cfg.irf_horizon);
    const IrfSet rf = rf_response(ss.params, cfg, cfg.irf_horizon);
    const double y_hf = hf.column("output")(0);
    const double y_rf = rf.column("output")(0);
    t.add_row({name, num(hf.column("exit_rate_bp")(0)), num(hf.column("entry_rate_bp")(0)), num(y_hf), num(y_rf),
               num(y_hf - y_rf), num(hf.column("tfp")(0)), num(ss.params.variant.alpha_c),
               num(ss.params.variant.alpha_e)});
    std::printf("%s done\n", name.c_str());
  };
  ModelParams base = cfg.params;
  base.variant = VariantConfig{};
  for (const std::string& name : names) {
    if (!only.empty() && name != only) continue;
    if (name == "interest_sensitive") {
      SteadyState ss = solve_stationary_equilibrium(base);
      const InterestSensitivity is = calibrate_interest_sensitivity(ss);
      ss.params.variant.alpha_c = is.alpha_c;
      ss.params.variant.alpha_e = is.alpha_e;
      ss.env.variant = ss.params.variant;
      add(name, ss);
    } else {
      add(name, variant_steady_state(base, named_variant(cfg, name), cfg.targets));
    }
  }
  OutputBatch out(cfg.output_dir);
  out.add(only.empty() ? "variants.csv" : "variants_" + only + ".csv", t.str());
  report(out.commit());
  return 0;
}

int cmd_sweep(const Common& common) {
  const RunConfig cfg = resolve(common);
  CsvTable t({"nu", "mu_c", "sigma_c", "a_z", "sigma_z", "entrant_mass", "kappa0", "exit_bp", "entry_bp",
              "output_hf", "output_rf", "output_gap_pp"});
  for (double nu : cfg.sweep_nu) {
    const ModelParams p = recalibrate_for_nu(cfg.params, nu, cfg.targets);
    const SteadyState ss = solve_stationary_equilibrium(p);
    const IrfSet hf = hf_response(ss, cfg, cfg.irf_horizon);
    const IrfSet rf = rf_response(ss.params, cfg, cfg.irf_horizon);
    const double y_hf = hf.column("output")(0);
    const double y_rf = rf.column("output")(0);
    t.add_row({num(nu), num(p.operating_cost.location), num(p.operating_cost.scale), num(p.productivity.mean),
               num(p.productivity.innovation_sd), num(p.entrant_mass), num(p.kappa0),
               num(hf.column("exit_rate_bp")(0)), num(hf.column("entry_rate_bp")(0)), num(y_hf), num(y_rf),
               num(y_hf - y_rf)});
    std::printf("nu = %s done\n", num(nu).c_str());
  }
  OutputBatch out(cfg.output_dir);
  out.add("sweep_nu.csv", t.str());
  report(out.commit());
  return 0;
}

}  // namespace firmdyn::cli

#include "firmdyn/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "firmdyn/errors.hpp"

namespace firmdyn {

RatePath measure_rates(const std::vector<Eigen::VectorXd>& measures, const std::vector<FirmSolution>& solutions,
                       double entrant_mass, const MarkovChain& chain, double initial_mass) {
  if (measures.size() < 2 || solutions.size() + 1 < measures.size()) {
    throw std::invalid_argument("measure_rates: need mu_0..mu_T and solutions for t < T");
  }
  const int periods = static_cast<int>(measures.size()) - 1;
  RatePath r;
  r.mass.resize(periods + 1);
  for (int t = 0; t <= periods; ++t) {
    r.mass[t] = measures[t].sum();
    if (!(r.mass[t] > 0.0)) {
      throw NumericalError("measure_rates: non-positive firm mass");
    }
  }
  const double before = initial_mass < 0.0 ? r.mass[0] : initial_mass;
  r.entry_rate.resize(periods);
  r.exit_rate.resize(periods);
  r.entrant_mass.resize(periods);
  r.exiting_mass.resize(periods);
  for (int t = 0; t < periods; ++t) {
    const FirmSolution& s = solutions[t];
    r.exiting_mass[t] = s.exit_prob().dot(measures[t]);
    r.entrant_mass[t] = entrant_mass * s.entry_prob.dot(chain.entrant_dist);
    r.exit_rate[t] = r.exiting_mass[t] / (0.5 * (r.mass[t + 1] + r.mass[t]));
    const double prev = t == 0 ? before : r.mass[t - 1];
    r.entry_rate[t] = r.entrant_mass[t] / (0.5 * (r.mass[t] + prev));
  }
  return r;
}

TfpPath tfp_path(const std::vector<Eigen::VectorXd>& measures, const Eigen::VectorXd& log_grid, double nu) {
  const Eigen::VectorXd weight = (log_grid.array() / (1.0 - nu)).exp();
  const auto n = static_cast<Eigen::Index>(measures.size());
  TfpPath out;
  out.mass.resize(n);
  out.productivity.resize(n);
  out.tfp.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd& mu = measures[static_cast<std::size_t>(t)];
    out.mass[t] = mu.sum();
    out.productivity[t] = mu.dot(weight) / out.mass[t];
    out.tfp[t] = std::pow(out.mass[t] * out.productivity[t], 1.0 - nu);
  }
  return out;
}

std::vector<Prices> stationary_price_path(const SteadyState& ss, int horizon) {
  return std::vector<Prices>(static_cast<std::size_t>(horizon) + 1, ss.prices);
}

ForesightRun simulate_foresight(const SteadyState& ss, const std::vector<Prices>& price_path) {
  ForesightRun run;
  run.solutions = solve_perfect_foresight(ss.env, price_path, ss.firm);
  const bool delayed = ss.params.variant.delayed_entry;
  const double m = ss.measure.entrant_scale;
  const MarkovChain& chain = ss.chain;

  Eigen::VectorXd incumbents = ss.measure.mass;
  if (!delayed) {
    incumbents -= entrants_in_measure(ss.firm, chain, m, false);
  }
  const auto periods = run.solutions.size();
  run.measures.reserve(periods);
  run.employment.resize(static_cast<Eigen::Index>(periods));
  for (std::size_t t = 0; t < periods; ++t) {
    const FirmSolution& s = run.solutions[t];
    const Eigen::VectorXd flow = m * s.entry_prob.cwiseProduct(chain.entrant_dist);
    Eigen::VectorXd mu = delayed ? incumbents : Eigen::VectorXd(incumbents + flow);
    Eigen::VectorXd carried = s.continue_prob.cwiseProduct(mu);
    if (delayed) {
      carried += flow;
    }
    incumbents = chain.transition.transpose() * carried;
    run.employment[static_cast<Eigen::Index>(t)] = s.labor.dot(mu);
    run.measures.push_back(std::move(mu));
  }
  run.rates = measure_rates(run.measures, run.solutions, m, chain, ss.measure.total());
  return run;
}

std::vector<Prices> price_path_from_irf(const SteadyState& ss, const IrfSet& irf, bool move_r, bool move_w,
                                        bool move_p) {
  const Eigen::VectorXd r = irf.column("real_rate") / 100.0;
  const Eigen::VectorXd w = irf.column("real_wage") / 100.0;
  const Eigen::VectorXd p = irf.column("rel_price") / 100.0;
  const double beta = ss.params.beta;
  const VariantConfig& v = ss.params.variant;
  std::vector<Prices> path(static_cast<std::size_t>(irf.horizon()) + 1, ss.prices);
  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(t);
    if (move_r) {
      path[t].sdf = beta * std::exp(-r[i]);
      const double gap = std::exp(r[i]) / beta - 1.0 / beta;
      path[t].operating_cost_shift = v.alpha_c * gap;
      path[t].entry_cost_shift = v.alpha_e * gap;
    }
    if (move_w) {
      path[t].w = ss.prices.w * std::exp(w[i]);
    }
    if (move_p) {
      path[t].p = ss.prices.p * std::exp(p[i]);
    }
  }
  return path;
}

namespace {

void require_settled(const IrfSet& irf) {
  const int h = irf.horizon();
  for (const char* name : {"real_rate", "real_wage", "rel_price"}) {
    if (std::abs(irf.column(name)[h]) / 100.0 > 1e-6) {
      throw std::invalid_argument(std::string("horizon too short: ") + name +
                                  " has not returned to the steady state");
    }
  }
}

}  // namespace

std::vector<Contribution> price_contributions(const IrfSet& irf, const SteadyState& ss) {
  require_settled(irf);
  const ForesightRun base = simulate_foresight(ss, stationary_price_path(ss, irf.horizon()));
  struct Channel {
    const char* name;
    bool r, w, p;
  };
  const Channel channels[] = {{"total", true, true, true}, {"r", true, false, false}, {"w", false, true, false},
                              {"p", false, false, true}};
  std::vector<Contribution> out;
  for (const Channel& c : channels) {
    const ForesightRun run = simulate_foresight(ss, price_path_from_irf(ss, irf, c.r, c.w, c.p));
    out.push_back({c.name, 1e4 * (run.rates.exit_rate - base.rates.exit_rate),
                   1e4 * (run.rates.entry_rate - base.rates.entry_rate)});
  }
  return out;
}

EmploymentGap employment_gap_rf_prices(const IrfSet& rf_irf, const IrfSet& hf_irf, const SteadyState& ss) {
  require_settled(rf_irf);
  const ForesightRun base = simulate_foresight(ss, stationary_price_path(ss, rf_irf.horizon()));
  const ForesightRun run = simulate_foresight(ss, price_path_from_irf(ss, rf_irf, true, true, true));
  const Eigen::VectorXd rf_n = rf_irf.column("employment");

  EmploymentGap gap;
  gap.rf_prices_gap = 100.0 * (run.employment.array() / base.employment.array()).log().matrix() - rf_n;
  const Eigen::Index h = std::min<Eigen::Index>(hf_irf.data.rows(), rf_irf.data.rows());
  gap.equilibrium_gap = hf_irf.column("employment").head(h) - rf_n.head(h);
  return gap;
}

Eigen::MatrixXd distribution_shift(const std::vector<Eigen::VectorXd>& measures, const Eigen::VectorXd& stationary,
                                   const std::vector<int>& horizons) {
  const Eigen::VectorXd base = stationary / stationary.sum();
  Eigen::MatrixXd out(stationary.size(), static_cast<Eigen::Index>(horizons.size()));
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    const int h = horizons[j];
    if (h < 0 || static_cast<std::size_t>(h) >= measures.size()) {
      throw std::out_of_range("distribution_shift: horizon " + std::to_string(h) + " outside the path");
    }
    const Eigen::VectorXd& mu = measures[static_cast<std::size_t>(h)];
    out.col(static_cast<Eigen::Index>(j)) = mu / mu.sum() - base;
  }
  return out;
}

std::vector<Eigen::VectorXd> irf_measures(const IrfSet& irf) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(irf.path.size());
  for (const PeriodState& s : irf.path) {
    out.push_back(s.operating);
  }
  return out;
}

ProbabilityProfiles probability_profiles(const SteadyState& ss, double log_change) {
  ProbabilityProfiles out;
  out.log_z = ss.chain.log_grid;
  out.scenarios = {"stationary", "r_up", "w_up", "p_up"};
  const int k = ss.chain.size();
  out.exit_prob.resize(k, 4);
  out.entry_prob.resize(k, 4);
  FirmEnv env = ss.env;
  // The r scenario moves the discount factor, so risk-neutral firms would ignore it.
  for (int j = 0; j < 4; ++j) {
    Prices pr = ss.prices;
    if (j == 1) {
      pr.sdf *= std::exp(-log_change);
      env.variant.risk_neutral = false;
    } else {
      env.variant.risk_neutral = ss.env.variant.risk_neutral;
    }
    if (j == 2) pr.w *= std::exp(log_change);
    if (j == 3) pr.p *= std::exp(log_change);
    const FirmSolution s = j == 0 ? ss.firm : solve_firm_stationary(env, pr);
    out.exit_prob.col(j) = s.exit_prob();
    out.entry_prob.col(j) = s.entry_prob;
  }
  return out;
}

SizeProfile size_profile(const SteadyState& ss, std::vector<double> lower_bounds) {
  if (lower_bounds.empty()) {
    lower_bounds = {0.0, 5.0, 10.0, 20.0, 50.0, 100.0, 250.0, 500.0, 1000.0};
  }
  const std::size_t classes = lower_bounds.size();
  SizeProfile out;
  out.lower = lower_bounds;
  out.firm_share.assign(classes, 0.0);
  out.employment_share.assign(classes, 0.0);
  std::vector<double> entrants(classes, 0.0);
  std::vector<double> exits(classes, 0.0);

  const Eigen::VectorXd& mu = ss.measure.mass;
  const Eigen::VectorXd flow = entrants_in_measure(ss.firm, ss.chain, ss.measure.entrant_scale,
                                                   ss.params.variant.delayed_entry);
  for (int i = 0; i < ss.chain.size(); ++i) {
    std::size_t c = 0;
    while (c + 1 < classes && ss.firm.labor[i] >= lower_bounds[c + 1]) {
      ++c;
    }
    out.firm_share[c] += mu[i];
    out.employment_share[c] += ss.firm.labor[i] * mu[i];
    entrants[c] += flow[i];
    exits[c] += (1.0 - ss.firm.continue_prob[i]) * mu[i];
  }
  out.entry_rate.resize(classes);
  out.exit_rate.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const double firms = out.firm_share[c];
    out.entry_rate[c] = firms > 0.0 ? entrants[c] / firms : 0.0;
    out.exit_rate[c] = firms > 0.0 ? exits[c] / firms : 0.0;
    out.firm_share[c] /= ss.agg.firm_mass;
    out.employment_share[c] /= ss.agg.employment;
  }
  return out;
}

}  // namespace firmdyn

#include "firmdyn/equilibrium.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "firmdyn/errors.hpp"

namespace firmdyn {

ModelParams ModelParams::defaults() {
  ModelParams p;
  p.beta = std::pow(1.04, -0.25);
  const QuarterlyProcess q = quarterly_from_annual(0.9771, 0.2676, p.nu);
  p.productivity = {q.persistence, q.innovation_sd, 0.439};
  return p;
}

ModelParams ModelParams::calibrated() {
  ModelParams p = defaults();
  p.operating_cost = {-6.215875158886, 4.537087923512};
  p.entry_cost = p.operating_cost;
  p.productivity.mean = 0.439439133692;
  p.entrant_mass = 7.483183175666e-4;
  p.kappa0 = 2.083333333333;
  return p;
}

void ModelParams::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) {
      throw ConfigError(std::string("ModelParams: ") + msg);
    }
  };
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
  require(sigma > 0.0, "sigma must be positive");
  require(kappa0 > 0.0, "kappa0 must be positive");
  require(kappa1 >= 0.0, "kappa1 must be non-negative");
  require(nu > 0.0 && nu < 1.0, "nu must lie in (0,1)");
  require(gamma > 1.0, "gamma must exceed 1");
  require(xi > 0.0, "xi must be positive");
  require(phi >= 0.0 && std::isfinite(phi), "phi must be non-negative");
  require(rho_m >= 0.0 && rho_m < 1.0, "rho_m must lie in [0,1)");
  require(entrant_mass > 0.0 && std::isfinite(entrant_mass), "entrant_mass must be positive");
  require(grid_size >= 2, "grid_size must be at least 2");
  require(vfi_tol > 0.0 && vfi_max_iter >= 1, "VFI tolerance and iteration cap must be positive");
  try {
    productivity.validate();
    operating_cost.validate();
    entry_cost.validate();
    variant.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

MarkovChain ModelParams::chain() const { return rouwenhorst(productivity, grid_size); }

FirmEnv ModelParams::firm_env() const {
  FirmEnv env;
  env.chain = chain();
  env.nu = nu;
  env.operating_cost = operating_cost;
  env.entry_cost = entry_cost;
  env.variant = variant;
  env.beta = beta;
  env.vfi_tol = vfi_tol;
  env.vfi_max_iter = vfi_max_iter;
  return env;
}

FirmMeasure step_measure(const FirmMeasure& measure, const Eigen::VectorXd& survive,
                         const Eigen::VectorXd& entryprob_next, const MarkovChain& chain, double entrant_mass) {
  FirmMeasure out;
  out.entrant_scale = entrant_mass;
  out.mass = chain.transition.transpose() * survive.cwiseProduct(measure.mass) +
             entrant_mass * entryprob_next.cwiseProduct(chain.entrant_dist);
  return out;
}

Eigen::VectorXd entrants_in_measure(const FirmSolution& firm, const MarkovChain& chain, double entrant_mass,
                                    bool delayed_entry) {
  Eigen::VectorXd flow = entrant_mass * firm.entry_prob.cwiseProduct(chain.entrant_dist);
  if (delayed_entry) {
    return chain.transition.transpose() * flow;
  }
  return flow;
}

FirmMeasure stationary_measure(const FirmSolution& firm, const MarkovChain& chain, double entrant_mass,
                               bool delayed_entry) {
  const int k = chain.size();
  if (firm.continue_prob.size() != k) {
    throw std::invalid_argument("stationary_measure: size mismatch");
  }
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(k, k) - chain.transition.transpose() * firm.continue_prob.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  FirmMeasure out;
  out.entrant_scale = entrant_mass;
  out.mass = lu.solve(entrants_in_measure(firm, chain, entrant_mass, delayed_entry));
  const double scale = std::max(out.mass.cwiseAbs().maxCoeff(), 1e-300);
  if (!out.mass.allFinite() || (out.mass.array() < -1e-10 * scale).any() ||
      (system * out.mass - entrants_in_measure(firm, chain, entrant_mass, delayed_entry)).cwiseAbs().maxCoeff() >
          1e-9 * scale) {
    throw ConvergenceError("stationary_measure: firm mass diverges (no exit anywhere)");
  }
  out.mass = out.mass.cwiseMax(0.0);
  return out;
}

FirmMeasure iterate_measure(const FirmSolution& firm, const MarkovChain& chain, double entrant_mass,
                            const Eigen::VectorXd& start, bool delayed_entry, double tol, int max_iter) {
  const Eigen::VectorXd inflow = entrants_in_measure(firm, chain, entrant_mass, delayed_entry);
  const Eigen::MatrixXd step = chain.transition.transpose() * firm.continue_prob.asDiagonal();
  Eigen::VectorXd mu = start;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd next = step * mu + inflow;
    const double diff = (next - mu).cwiseAbs().maxCoeff();
    const double size = next.cwiseAbs().maxCoeff();
    mu = std::move(next);
    if (!mu.allFinite() || size > 1e300) {
      break;
    }
    if (diff <= tol * std::max(size, 1e-300)) {
      return {mu, entrant_mass};
    }
  }
  throw ConvergenceError("iterate_measure: no convergence (firm mass diverges or decays too slowly)");
}

double annual_exit_rate(const FirmSolution& firm, const FirmMeasure& measure, const MarkovChain& chain) {
  Eigen::VectorXd m = measure.mass;
  for (int q = 0; q < 4; ++q) {
    m = chain.transition.transpose() * firm.continue_prob.cwiseProduct(m);
  }
  return 1.0 - m.sum() / measure.total();
}

double aggregate_tfp(const Eigen::VectorXd& mass, const Eigen::VectorXd& log_grid, double nu) {
  const Eigen::VectorXd weight = (log_grid.array() / (1.0 - nu)).exp();
  return std::pow(mass.dot(weight), 1.0 - nu);
}

Aggregates compute_aggregates(const FirmMeasure& measure, const FirmSolution& firm, const Prices& prices,
                              const ModelParams& params, const MarkovChain& chain) {
  const int k = chain.size();
  if (measure.mass.size() != k || firm.labor.size() != k) {
    throw std::invalid_argument("compute_aggregates: size mismatch");
  }
  const Eigen::VectorXd& mu = measure.mass;
  const Eigen::ArrayXd z = chain.log_grid.array().exp();
  const Eigen::ArrayXd y = z * firm.labor.array().pow(params.nu);
  const bool delayed = params.variant.delayed_entry;

  Aggregates a;
  a.output = (y * mu.array()).sum();
  a.employment = firm.labor.dot(mu);
  a.consumption = a.output;  // zero inflation: no Rotemberg resource cost
  a.firm_mass = measure.total();

  const Eigen::VectorXd entrants = entrants_in_measure(firm, chain, measure.entrant_scale, delayed);
  a.entrant_mass = entrants.sum();
  const Eigen::VectorXd flow = measure.entrant_scale * firm.entry_prob.cwiseProduct(chain.entrant_dist);
  double entry_costs = measure.entrant_scale * chain.entrant_dist.dot(firm.expected_entry_cost);
  if (params.variant.free_entry.enabled) {
    entry_costs = params.variant.free_entry.e_tilde * measure.entrant_scale;
  }
  a.transfers = firm.expected_operating_cost.dot(mu) + entry_costs;
  a.firm_profit = prices.p * a.output - prices.w * a.employment - a.transfers;
  a.intermediate_profit = (1.0 - prices.p) * a.output;
  a.dividends = a.firm_profit + a.intermediate_profit;
  a.tfp = aggregate_tfp(mu, chain.log_grid, params.nu);

  a.avg_incumbent_size = (a.employment - firm.labor.dot(entrants)) / (a.firm_mass - a.entrant_mass);
  const Eigen::VectorXd exiting = firm.exit_prob().cwiseProduct(mu);
  a.avg_exiting_size = firm.labor.dot(exiting) / exiting.sum();
  a.exit_rate_quarterly = exiting.sum() / a.firm_mass;
  a.exit_rate_annual = annual_exit_rate(firm, measure, chain);
  a.entry_rate = flow.sum() / a.firm_mass;
  return a;
}

Moments moments_of(const Aggregates& agg) {
  return {agg.exit_rate_annual, agg.avg_incumbent_size, agg.avg_exiting_size, agg.employment};
}

SteadyState steady_state_at_wage(const ModelParams& params, double wage) {
  SteadyState ss;
  ss.params = params;
  ss.env = params.firm_env();
  ss.chain = ss.env.chain;
  ss.prices.p = params.rel_price();
  ss.prices.w = wage;
  ss.prices.sdf = params.beta;
  ss.nominal_rate = 1.0 / params.beta;
  ss.inflation = 1.0;
  ss.firm = solve_firm_stationary(ss.env, ss.prices);
  ss.measure = stationary_measure(ss.firm, ss.chain, params.entrant_mass, params.variant.delayed_entry);
  ss.agg = compute_aggregates(ss.measure, ss.firm, ss.prices, params, ss.chain);
  const double c = ss.agg.consumption;
  const double n = ss.agg.employment;
  ss.labor_supply_residual = params.kappa0 * std::pow(c, params.sigma) * std::pow(n, params.kappa1) / wage - 1.0;
  ss.goods_residual = 1.0 - ss.agg.consumption / ss.agg.output;
  return ss;
}

SteadyState solve_stationary_equilibrium(const ModelParams& params) {
  params.validate();
  if (params.variant.free_entry.enabled) {
    throw ConfigError("solve_stationary_equilibrium: free entry requires solve_free_entry_stationary");
  }
  auto residual = [&](double log_w) { return steady_state_at_wage(params, std::exp(log_w)).labor_supply_residual; };

  // Bracket log w outward from w = 1.
  double lo = -0.05;
  double hi = 0.05;
  double f_lo = residual(lo);
  double f_hi = residual(hi);
  for (int i = 0; i < 40 && f_lo * f_hi > 0.0; ++i) {
    lo -= 0.25;
    hi += 0.25;
    f_lo = residual(lo);
    f_hi = residual(hi);
  }
  if (f_lo * f_hi > 0.0) {
    throw ConvergenceError("solve_stationary_equilibrium: could not bracket the market-clearing wage");
  }

  std::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) < 1e-14; };
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi, tol, max_iter);
  SteadyState ss = steady_state_at_wage(params, std::exp(0.5 * (a + b)));
  if (!(std::abs(ss.labor_supply_residual) < 1e-8) || !(std::abs(ss.goods_residual) < 1e-8)) {
    throw ConvergenceError("solve_stationary_equilibrium: market-clearing residual " +
                           std::to_string(ss.labor_supply_residual));
  }
  return ss;
}

}  // namespace firmdyn

#include "firmdyn/firm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "firmdyn/errors.hpp"

namespace firmdyn {

void Prices::validate() const {
  if (!(p > 0.0) || !(w > 0.0)) {
    throw std::invalid_argument("Prices: p and w must be positive");
  }
  if (!(sdf >= 0.0 && sdf < 1.5)) {
    throw std::invalid_argument("Prices: sdf must lie in [0, 1.5)");
  }
  if (!std::isfinite(operating_cost_shift) || !std::isfinite(entry_cost_shift)) {
    throw std::invalid_argument("Prices: cost shifts must be finite");
  }
}

void FirmEnv::validate() const {
  chain.validate();
  if (!(nu > 0.0 && nu < 1.0)) {
    throw std::invalid_argument("FirmEnv: nu must lie in (0,1)");
  }
  operating_cost.validate();
  entry_cost.validate();
  variant.validate();
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("FirmEnv: beta must lie in (0,1)");
  }
  if (!(vfi_tol > 0.0) || vfi_max_iter < 1) {
    throw std::invalid_argument("FirmEnv: invalid VFI controls");
  }
}

double FirmEnv::firm_sdf(const Prices& prices) const { return variant.risk_neutral ? beta : prices.sdf; }

double FirmEnv::cost_scale(const Prices& prices) const {
  switch (variant.denomination) {
    case CostDenomination::labor:
      return prices.w;
    case CostDenomination::production_good:
      return prices.p;
    case CostDenomination::final_good:
      break;
  }
  return 1.0;
}

CostBelow cost_below(const LognormalSpec& spec, double scale, double cap) {
  if (!(cap > 0.0)) {
    return {};
  }
  const double x = cap / scale;
  return {lognormal_cdf(spec, x), scale * lognormal_partial_mean(spec, x)};
}

double labor_policy(double z, double p, double w, double nu) {
  return std::pow(w / (nu * p * z), 1.0 / (nu - 1.0));
}

double period_profit(double z, double p, double w, double nu) {
  const double n = labor_policy(z, p, w, nu);
  return p * z * std::pow(n, nu) - w * n;
}

Thresholds thresholds(const Eigen::VectorXd& value, double sdf, const MarkovChain& chain, bool delayed_entry) {
  Thresholds t;
  t.exit = sdf * (chain.transition * value);
  t.entry = delayed_entry ? t.exit : value;
  return t;
}

namespace {

LognormalSpec shifted(const LognormalSpec& spec, double shift) { return {spec.location + shift, spec.scale}; }

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite values");
  }
}

}  // namespace

Eigen::VectorXd bellman_step(const FirmEnv& env, const Prices& prices, const Eigen::VectorXd& next_value) {
  const int k = env.chain.size();
  const LognormalSpec op = shifted(env.operating_cost, prices.operating_cost_shift);
  const double scale = env.cost_scale(prices);
  const Eigen::VectorXd cstar = env.firm_sdf(prices) * (env.chain.transition * next_value);
  Eigen::VectorXd v(k);
  for (int i = 0; i < k; ++i) {
    const double z = std::exp(env.chain.log_grid[i]);
    const CostBelow c = cost_below(op, scale, cstar[i]);
    v[i] = period_profit(z, prices.p, prices.w, env.nu) + cstar[i] * c.prob - c.expected_paid;
  }
  return v;
}

FirmSolution firm_policies(const FirmEnv& env, const Prices& prices, const Eigen::VectorXd& value,
                           const Eigen::VectorXd& next_value) {
  const int k = env.chain.size();
  const LognormalSpec op = shifted(env.operating_cost, prices.operating_cost_shift);
  const LognormalSpec ent = shifted(env.entry_cost, prices.entry_cost_shift);
  const double scale = env.cost_scale(prices);
  const Thresholds th = thresholds(next_value, env.firm_sdf(prices), env.chain, env.variant.delayed_entry);

  FirmSolution sol;
  sol.value = value;
  sol.exit_threshold = th.exit;
  sol.entry_threshold = env.variant.delayed_entry ? th.exit : value;
  sol.labor.resize(k);
  sol.profit.resize(k);
  sol.continue_prob.resize(k);
  sol.entry_prob.resize(k);
  sol.expected_operating_cost.resize(k);
  sol.expected_entry_cost.resize(k);
  for (int i = 0; i < k; ++i) {
    const double z = std::exp(env.chain.log_grid[i]);
    sol.labor[i] = labor_policy(z, prices.p, prices.w, env.nu);
    sol.profit[i] = period_profit(z, prices.p, prices.w, env.nu);
    const CostBelow c = cost_below(op, scale, sol.exit_threshold[i]);
    sol.continue_prob[i] = c.prob;
    sol.expected_operating_cost[i] = c.expected_paid;
    if (env.variant.free_entry.enabled) {
      sol.entry_prob[i] = 1.0;
      sol.expected_entry_cost[i] = 0.0;
    } else {
      const CostBelow e = cost_below(ent, scale, sol.entry_threshold[i]);
      sol.entry_prob[i] = e.prob;
      sol.expected_entry_cost[i] = e.expected_paid;
    }
  }
  return sol;
}

FirmSolution solve_firm_stationary(const FirmEnv& env, const Prices& prices) {
  env.validate();
  prices.validate();
  const int k = env.chain.size();
  const double sdf = env.firm_sdf(prices);

  // Start from the value of never exiting at zero cost, an upper bound when sdf < 1.
  Eigen::VectorXd v(k);
  for (int i = 0; i < k; ++i) {
    v[i] = period_profit(std::exp(env.chain.log_grid[i]), prices.p, prices.w, env.nu);
  }
  if (sdf < 1.0) {
    v /= (1.0 - sdf);
  }

  for (int it = 1; it <= env.vfi_max_iter; ++it) {
    Eigen::VectorXd next = bellman_step(env, prices, v);
    check_finite(next, "solve_firm_stationary");
    const double dist = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (dist < env.vfi_tol) {
      if ((v.array() < 0.0).any()) {
        throw NumericalError("solve_firm_stationary: negative firm value, prices are degenerate");
      }
      FirmSolution sol = firm_policies(env, prices, v, v);
      sol.iterations = it;
      return sol;
    }
  }
  throw ConvergenceError("solve_firm_stationary: no convergence after " + std::to_string(env.vfi_max_iter) +
                         " iterations");
}

std::vector<FirmSolution> solve_perfect_foresight(const FirmEnv& env, const std::vector<Prices>& price_path,
                                                  const FirmSolution& terminal) {
  if (price_path.size() < 2) {
    throw std::invalid_argument("solve_perfect_foresight: horizon must be at least 1");
  }
  env.validate();
  if (terminal.value.size() != env.chain.size()) {
    throw std::invalid_argument("solve_perfect_foresight: terminal solution has the wrong size");
  }
  const std::size_t periods = price_path.size();
  std::vector<FirmSolution> out(periods);
  Eigen::VectorXd next = terminal.value;
  for (std::size_t s = periods; s-- > 0;) {
    price_path[s].validate();
    Eigen::VectorXd v = bellman_step(env, price_path[s], next);
    check_finite(v, "solve_perfect_foresight");
    out[s] = firm_policies(env, price_path[s], v, next);
    next = std::move(v);
  }
  return out;
}

}  // namespace firmdyn

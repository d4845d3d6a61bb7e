#pragma once

#include <vector>

#include <Eigen/Dense>

#include "firmdyn/stochproc.hpp"
#include "firmdyn/variant_config.hpp"

namespace firmdyn {

/// Prices faced by production firms in one period.
struct Prices {
  double p = 1.0;    // relative price of the undifferentiated good
  double w = 1.0;    // real wage
  double sdf = 0.99; // Lambda_{t,t+1}
  // Log-location shifts of the cost distributions (interest-sensitive variant).
  double operating_cost_shift = 0.0;
  double entry_cost_shift = 0.0;

  void validate() const;
};

struct FirmEnv {
  MarkovChain chain;
  double nu = 0.9;
  LognormalSpec operating_cost;
  LognormalSpec entry_cost;
  VariantConfig variant;
  /// Discount factor used in place of the sdf by risk-neutral firms.
  double beta = 0.99;
  double vfi_tol = 1e-10;
  int vfi_max_iter = 100000;

  void validate() const;
  double firm_sdf(const Prices& prices) const;
  /// Final-good value of one unit of a cost draw.
  double cost_scale(const Prices& prices) const;
};

struct FirmSolution {
  Eigen::VectorXd value;
  Eigen::VectorXd labor;
  Eigen::VectorXd profit;
  Eigen::VectorXd exit_threshold;   // c*
  Eigen::VectorXd entry_threshold;  // e*
  Eigen::VectorXd continue_prob;    // G_c(c*)
  Eigen::VectorXd entry_prob;       // G_e(e*), or 1 under free entry
  /// Expected operating cost paid per incumbent, E[c 1{c <= c*}], final-good units.
  Eigen::VectorXd expected_operating_cost;
  /// Expected entry cost paid per potential entrant.
  Eigen::VectorXd expected_entry_cost;
  int iterations = 0;

  Eigen::VectorXd exit_prob() const { return 1.0 - continue_prob.array(); }
};

struct Thresholds {
  Eigen::VectorXd exit;   // c*
  Eigen::VectorXd entry;  // e*
};

/// Probability that a scaled cost draw falls below `cap`, and the expected
/// payment scale*x*1{scale*x <= cap}. Zero for cap <= 0.
struct CostBelow {
  double prob = 0.0;
  double expected_paid = 0.0;
};
CostBelow cost_below(const LognormalSpec& spec, double scale, double cap);

double labor_policy(double z, double p, double w, double nu);
double period_profit(double z, double p, double w, double nu);

/// c* = sdf * P V and e* = V (or e* = c* when entry is delayed).
Thresholds thresholds(const Eigen::VectorXd& value, double sdf, const MarkovChain& chain,
                      bool delayed_entry = false);

/// One application of the Bellman operator: V = profit + c* G_c(c*) - E[c 1{c<=c*}]
/// with c* = sdf * P * next_value.
Eigen::VectorXd bellman_step(const FirmEnv& env, const Prices& prices, const Eigen::VectorXd& next_value);

/// Policies, thresholds and probabilities of a firm whose current value is
/// `value` and whose continuation value is `next_value`.
FirmSolution firm_policies(const FirmEnv& env, const Prices& prices, const Eigen::VectorXd& value,
                           const Eigen::VectorXd& next_value);

/// Value function iteration to the stationary fixed point at constant prices.
FirmSolution solve_firm_stationary(const FirmEnv& env, const Prices& prices);

/// Backward induction over t = T..0 starting from the terminal value; period
/// t uses the dated sdf of price_path[t].
std::vector<FirmSolution> solve_perfect_foresight(const FirmEnv& env, const std::vector<Prices>& price_path,
                                                  const FirmSolution& terminal);

}  // namespace firmdyn

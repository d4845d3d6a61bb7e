#pragma once

#include <Eigen/Dense>

#include "firmdyn/firm.hpp"
#include "firmdyn/stochproc.hpp"
#include "firmdyn/variant_config.hpp"

namespace firmdyn {

/// Full parameter set of the economy.
struct ModelParams {
  double beta = 0.0;       // set by defaults(): 1.04^(-1/4)
  double sigma = 1.0;      // inverse intertemporal elasticity
  double kappa0 = 2.083;   // labour disutility scale
  double kappa1 = 1.0;     // inverse Frisch elasticity
  double nu = 0.9;         // returns to scale
  double gamma = 6.0;      // elasticity of substitution across varieties
  double xi = 50.0;        // Rotemberg adjustment cost
  double phi = 1.5;        // Taylor-rule inflation response
  double rho_m = 0.5;      // persistence of the monetary shock
  double entrant_mass = 7.483e-4;  // M
  int grid_size = 50;
  AR1Spec productivity;
  LognormalSpec operating_cost{-6.216, 4.537};
  LognormalSpec entry_cost{-6.216, 4.537};
  VariantConfig variant;
  double vfi_tol = 1e-10;
  int vfi_max_iter = 100000;

  /// Published calibration (rounded), with the productivity process mapped
  /// from the annual employment AR(1) (0.9771, 0.2676).
  static ModelParams defaults();
  /// Unrounded calibration reproducing the four targets exactly.
  static ModelParams calibrated();

  void validate() const;
  double rel_price() const { return (gamma - 1.0) / gamma; }
  MarkovChain chain() const;
  FirmEnv firm_env() const;
};

struct FirmMeasure {
  Eigen::VectorXd mass;       // mu(z_i)
  double entrant_scale = 0.0; // M

  double total() const { return mass.sum(); }
};

struct Aggregates {
  double output = 0.0;          // Y
  double employment = 0.0;      // N
  double consumption = 0.0;     // C
  double firm_profit = 0.0;     // Omega
  double intermediate_profit = 0.0;  // Upsilon
  double dividends = 0.0;       // D
  double transfers = 0.0;       // T
  double tfp = 0.0;             // A
  double firm_mass = 0.0;       // Gamma
  double entrant_mass = 0.0;    // entrants operating this period
  double avg_incumbent_size = 0.0;
  double avg_exiting_size = 0.0;
  double exit_rate_quarterly = 0.0;
  double exit_rate_annual = 0.0;
  double entry_rate = 0.0;
};

struct SteadyState {
  ModelParams params;
  MarkovChain chain;
  FirmEnv env;
  Prices prices;
  double nominal_rate = 0.0;  // R
  double inflation = 1.0;     // Pi
  FirmSolution firm;
  FirmMeasure measure;
  Aggregates agg;
  double labor_supply_residual = 0.0;
  double goods_residual = 0.0;
};

/// mu'(z_i) = sum_j survive_j P_ji mu_j + M entryprob_next_i q_i.
FirmMeasure step_measure(const FirmMeasure& measure, const Eigen::VectorXd& survive,
                         const Eigen::VectorXd& entryprob_next, const MarkovChain& chain, double entrant_mass);

/// Operating-measure mass of entrants: M G_e q, transported one period by P
/// when entry is delayed.
Eigen::VectorXd entrants_in_measure(const FirmSolution& firm, const MarkovChain& chain, double entrant_mass,
                                    bool delayed_entry);

/// Fixed point of the measure transition, solved directly.
FirmMeasure stationary_measure(const FirmSolution& firm, const MarkovChain& chain, double entrant_mass,
                               bool delayed_entry = false);

/// Fixed point of the measure transition by iteration from `start`; relative
/// sup-norm tolerance.
FirmMeasure iterate_measure(const FirmSolution& firm, const MarkovChain& chain, double entrant_mass,
                            const Eigen::VectorXd& start, bool delayed_entry = false, double tol = 1e-12,
                            int max_iter = 1000000);

/// 1 - (mass surviving four quarters of exit draws) / Gamma.
double annual_exit_rate(const FirmSolution& firm, const FirmMeasure& measure, const MarkovChain& chain);

/// Aggregate TFP [sum mu z^(1/(1-nu))]^(1-nu).
double aggregate_tfp(const Eigen::VectorXd& mass, const Eigen::VectorXd& log_grid, double nu);

Aggregates compute_aggregates(const FirmMeasure& measure, const FirmSolution& firm, const Prices& prices,
                              const ModelParams& params, const MarkovChain& chain);

/// The three scale-free targeted moments plus employment.
struct Moments {
  double annual_exit_rate = 0.0;
  double avg_incumbent_size = 0.0;
  double avg_exiting_size = 0.0;
  double employment = 0.0;
};
Moments moments_of(const Aggregates& agg);

/// Stationary equilibrium with zero inflation; the real wage clears the
/// labour market given M and kappa0.
SteadyState solve_stationary_equilibrium(const ModelParams& params);

/// Steady state at a given wage and M without imposing labour market
/// clearing; kappa0 is not used.
SteadyState steady_state_at_wage(const ModelParams& params, double wage);

}  // namespace firmdyn

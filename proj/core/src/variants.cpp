#include "firmdyn/variants.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "firmdyn/errors.hpp"

namespace firmdyn {

ModelParams apply_variant(const ModelParams& params, const VariantConfig& variant) {
  variant.validate();
  ModelParams out = params;
  out.variant = variant;
  return out;
}

bool variant_needs_recalibration(const VariantConfig& variant) {
  return variant.denomination != CostDenomination::final_good || variant.delayed_entry;
}

FreeEntryResult solve_free_entry_stationary(const ModelParams& params, double employment_target) {
  if (!(employment_target > 0.0)) {
    throw ConfigError("solve_free_entry_stationary: employment target must be positive");
  }
  ModelParams p = params;
  p.variant.free_entry.enabled = true;
  p.validate();

  p.entrant_mass = 1.0;
  const SteadyState unit = steady_state_at_wage(p, 1.0);
  FreeEntryResult out;
  out.entry.entrant_value = unit.firm.value.dot(unit.chain.entrant_dist);
  if (!(out.entry.entrant_value > 0.0)) {
    throw NumericalError("solve_free_entry_stationary: entrants expect no value, no equilibrium with entry");
  }
  out.entry.e_tilde = out.entry.entrant_value;
  out.entry.alpha = p.variant.free_entry.alpha;
  out.entry.entrant_mass = employment_target / unit.agg.employment;

  p.entrant_mass = out.entry.entrant_mass;
  p.variant.free_entry.e_tilde = out.entry.e_tilde;
  const double output = unit.agg.output * out.entry.entrant_mass;
  p.kappa0 = 1.0 / (std::pow(output, p.sigma) * std::pow(employment_target, p.kappa1));
  out.steady = steady_state_at_wage(p, 1.0);
  if (!(std::abs(out.steady.labor_supply_residual) < 1e-8)) {
    throw ConvergenceError("solve_free_entry_stationary: labour market does not clear");
  }
  return out;
}

SteadyState variant_steady_state(const ModelParams& calibrated_base, const VariantConfig& variant,
                                 const CalibrationTargets& targets) {
  ModelParams p = apply_variant(calibrated_base, variant);
  if (variant.free_entry.enabled) {
    return solve_free_entry_stationary(p, targets.employment).steady;
  }
  if (variant_needs_recalibration(variant)) {
    p = calibrate(targets, p).params;
  }
  return solve_stationary_equilibrium(p);
}

std::pair<double, double> impact_rates(const SteadyState& ss, double alpha_c, double alpha_e) {
  SteadyState s = ss;
  s.params.variant.alpha_c = alpha_c;
  s.params.variant.alpha_e = alpha_e;
  s.env.variant = s.params.variant;
  LinearReOptions opts;
  opts.check_root_count = false;
  const HfModel hf = solve_hf(s, opts);
  IrfOptions irf_opts;
  irf_opts.horizon = 2;
  irf_opts.summary_horizon = 8;
  const IrfSet irf = impulse_response(hf.system, hf.solution, irf_opts);
  return {irf.column("exit_rate_bp")[0], irf.column("entry_rate_bp")[0]};
}

namespace {

struct RateFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const SteadyState* ss;
  RateTargets targets;
  int* evaluations;

  int inputs() const { return 2; }
  int values() const { return 2; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    ++*evaluations;
    try {
      const auto [exit_bp, entry_bp] = impact_rates(*ss, x[0], x[1]);
      f.resize(2);
      f << exit_bp - targets.exit_bp, entry_bp - targets.entry_bp;
    } catch (const NumericalError&) {
      return -1;
    }
    return 0;
  }
};

}  // namespace

InterestSensitivity calibrate_interest_sensitivity(const SteadyState& ss, const RateTargets& targets,
                                                   double tol_bp) {
  if (ss.params.variant.free_entry.enabled) {
    throw ConfigError("calibrate_interest_sensitivity: not defined under free entry");
  }
  InterestSensitivity out;
  RateFunctor functor{&ss, targets, &out.evaluations};
  // Responses are affine in the sensitivities to first order; a wide step keeps
  // finite-difference noise from the linear solver out of the Jacobian.
  Eigen::NumericalDiff<RateFunctor, Eigen::Central> diff(functor, 1e-6);
  Eigen::HybridNonLinearSolver<Eigen::NumericalDiff<RateFunctor, Eigen::Central>> solver(diff);
  solver.parameters.xtol = 1e-12;
  solver.parameters.maxfev = 200;
  Eigen::VectorXd x(2);
  x << 5.0, 50.0;
  solver.solve(x);

  Eigen::VectorXd f(2);
  if (functor(x, f) != 0) {
    throw ConvergenceError("calibrate_interest_sensitivity: solver failed");
  }
  out.alpha_c = x[0];
  out.alpha_e = x[1];
  out.exit_bp = f[0] + targets.exit_bp;
  out.entry_bp = f[1] + targets.entry_bp;
  if (!(f.cwiseAbs().maxCoeff() < tol_bp)) {
    throw ConvergenceError("calibrate_interest_sensitivity: impact responses missed by " +
                           std::to_string(f.cwiseAbs().maxCoeff()) + " bp");
  }
  return out;
}

ModelParams recalibrate_for_nu(const ModelParams& base, double nu, const CalibrationTargets& targets) {
  ModelParams p = base;
  p.nu = nu;
  const QuarterlyProcess q = quarterly_from_annual(0.9771, 0.2676, nu);
  p.productivity.persistence = q.persistence;
  p.productivity.innovation_sd = q.innovation_sd;
  // Start where the mean-productivity firm keeps its size, n = (nu p z / w)^(1/(1-nu)),
  // and cost draws keep their ratio to profit per worker, (1-nu)/nu * w.
  const double p_rel = base.rel_price();
  const double log_size = (std::log(base.nu * p_rel) + base.productivity.mean) / (1.0 - base.nu);
  p.productivity.mean = (1.0 - nu) * log_size - std::log(nu * p_rel);
  const double cost_shift = std::log((1.0 - nu) / nu) - std::log((1.0 - base.nu) / base.nu);
  p.operating_cost.location += cost_shift;
  p.entry_cost.location += cost_shift;
  return calibrate(targets, p).params;
}

}  // namespace firmdyn

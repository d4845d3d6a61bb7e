#include "firmdyn/calibration.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "firmdyn/errors.hpp"

namespace firmdyn {

void CalibrationTargets::validate() const {
  if (!(annual_exit_rate > 0.0 && annual_exit_rate < 1.0)) {
    throw ConfigError("calibration: annual exit-rate target must lie in (0,1)");
  }
  if (!(avg_incumbent_size > 0.0) || !(avg_exiting_size > 0.0) || !(employment > 0.0)) {
    throw ConfigError("calibration: size and employment targets must be positive");
  }
}

Moments model_moments(const ModelParams& params, double wage) {
  ModelParams unit = params;
  unit.entrant_mass = 1.0;
  return moments_of(steady_state_at_wage(unit, wage).agg);
}

ModelParams scale_to_employment(const ModelParams& params, double employment_target) {
  ModelParams out = params;
  out.entrant_mass = 1.0;
  const Aggregates unit = steady_state_at_wage(out, 1.0).agg;
  out.entrant_mass = employment_target / unit.employment;
  const double output = unit.output * out.entrant_mass;
  out.kappa0 = 1.0 / (std::pow(output, out.sigma) * std::pow(employment_target, out.kappa1));
  return out;
}

namespace {

ModelParams with_coordinates(const ModelParams& base, const Eigen::Vector3d& x) {
  ModelParams p = base;
  p.operating_cost = {x[0], std::exp(x[1])};
  p.entry_cost = p.operating_cost;
  p.productivity.mean = x[2];
  return p;
}

struct MomentFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ModelParams* base;
  const CalibrationTargets* targets;
  int* evaluations;

  int inputs() const { return 3; }
  int values() const { return 3; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    ++*evaluations;
    try {
      const Moments m = model_moments(with_coordinates(*base, x.head<3>()));
      f.resize(3);
      f << m.annual_exit_rate / targets->annual_exit_rate - 1.0,
          m.avg_incumbent_size / targets->avg_incumbent_size - 1.0,
          m.avg_exiting_size / targets->avg_exiting_size - 1.0;
    } catch (const NumericalError&) {
      return -1;  // tells the solver to stop; reported below
    }
    return f.allFinite() ? 0 : -1;
  }
};

}  // namespace

CalibrationResult calibrate(const CalibrationTargets& targets, const ModelParams& start, double tol) {
  targets.validate();
  start.validate();

  CalibrationResult result;
  MomentFunctor functor{&start, &targets, &result.evaluations};
  Eigen::NumericalDiff<MomentFunctor, Eigen::Central> diff(functor, 1e-12);
  Eigen::HybridNonLinearSolver<Eigen::NumericalDiff<MomentFunctor, Eigen::Central>> solver(diff);
  solver.parameters.xtol = 1e-14;
  solver.parameters.maxfev = 400;

  Eigen::VectorXd x(3);
  x << start.operating_cost.location, std::log(start.operating_cost.scale), start.productivity.mean;
  solver.solve(x);

  Eigen::VectorXd f(3);
  if (functor(x, f) != 0) {
    throw ConvergenceError("calibrate: moment evaluation failed");
  }
  result.max_relative_residual = f.cwiseAbs().maxCoeff();
  if (!(result.max_relative_residual < tol)) {
    throw ConvergenceError("calibrate: targets not reached, max relative residual " +
                           std::to_string(result.max_relative_residual));
  }
  result.params = scale_to_employment(with_coordinates(start, x.head<3>()), targets.employment);
  result.achieved = moments_of(steady_state_at_wage(result.params, 1.0).agg);
  return result;
}

}  // namespace firmdyn

#pragma once

#include "firmdyn/equilibrium.hpp"

namespace firmdyn {

struct CalibrationTargets {
  double annual_exit_rate = 0.086;
  double avg_incumbent_size = 19.2;
  double avg_exiting_size = 7.7;
  double employment = 0.6;

  void validate() const;
};

struct CalibrationResult {
  ModelParams params;
  Moments achieved;
  double max_relative_residual = 0.0;
  int evaluations = 0;
};

/// Moments of the stationary economy at the normalised wage w = 1.
Moments model_moments(const ModelParams& params, double wage = 1.0);

/// Joint calibration of (mu_c, sigma_c, a_z) to the three scale-free moments
/// at w = 1, then M from the employment target and kappa0 from labour supply.
/// Entry costs share the operating-cost distribution. `start` supplies the
/// fixed parameters and the initial guess.
CalibrationResult calibrate(const CalibrationTargets& targets, const ModelParams& start, double tol = 1e-10);

/// Given (mu_c, sigma_c, a_z), set M and kappa0 so that w = 1 clears the
/// labour market at the employment target.
ModelParams scale_to_employment(const ModelParams& params, double employment_target);

}  // namespace firmdyn

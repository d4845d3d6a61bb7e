#pragma once

#include "firmdyn/dynamics.hpp"
#include "firmdyn/equilibrium.hpp"
#include "firmdyn/linear_re.hpp"

namespace firmdyn {

/// Representative-firm New Keynesian model with decreasing returns.
struct RFParams {
  double beta = 0.99;
  double sigma = 1.0;
  double kappa1 = 1.0;
  double nu = 0.9;
  double gamma = 6.0;
  double xi = 50.0;
  double phi = 1.5;
  double rho_m = 0.5;

  static RFParams from(const ModelParams& params);
  void validate() const;
  /// Phillips-curve slope ((gamma-1)/xi)(sigma + (kappa1+1)/nu - 1).
  double slope() const;
};

/// Impact coefficients per unit monetary shock; every response is
/// coefficient * rho_m^t.
struct RFSolution {
  RFParams params;
  double kappa = 0.0;
  double a_y = 0.0;
  double a_pi = 0.0;
  double a_R = 0.0;
  double a_r = 0.0;
  // implied by the static firm and household conditions
  double a_n = 0.0;
  double a_w = 0.0;
  double a_p = 0.0;
  double a_d = 0.0;  // dividends
};

/// Closed form by undetermined coefficients. Throws IndeterminacyError for phi <= 1.
RFSolution solve_rf(const RFParams& params);

/// IS, Phillips and Taylor rows over (y, pi, R) in the generic lead/current/lag form.
LinearSystem rf_linear_system(const RFParams& params);

/// Geometric impulse responses on the common schema; entry, exit, firm
/// mass and TFP rows are zero.
IrfSet rf_irf(const RFSolution& sol, const IrfOptions& options = {});

}  // namespace firmdyn

#pragma once

#include <vector>

#include "firmdyn/calibration.hpp"
#include "firmdyn/dynamics.hpp"
#include "firmdyn/equilibrium.hpp"
#include "firmdyn/variant_config.hpp"

namespace firmdyn {

/// Parameters with `variant` switched on; rejects conflicting flags.
ModelParams apply_variant(const ModelParams& params, const VariantConfig& variant);

/// True when the variant changes the stationary equilibrium, so the
/// calibration targets must be re-hit (cost denomination, delayed entry).
bool variant_needs_recalibration(const VariantConfig& variant);

struct FreeEntrySolution {
  double entrant_mass = 0.0;  // stationary M~
  double entrant_value = 0.0; // V^e = sum_i V(z_i) q_i
  double e_tilde = 0.0;
  double alpha = 0.0;
};

struct FreeEntryResult {
  SteadyState steady;
  FreeEntrySolution entry;
};

/// w = 1; e_tilde solves V^e = e_tilde; mu at M~ = 1 scaled to hit the
/// employment target; kappa0 from labour supply with C = Y.
FreeEntryResult solve_free_entry_stationary(const ModelParams& params, double employment_target = 0.6);

/// Stationary equilibrium of a variant built on calibrated baseline
/// primitives: recalibrates when the variant moves the targeted moments,
/// solves the free-entry block when enabled.
SteadyState variant_steady_state(const ModelParams& calibrated_base, const VariantConfig& variant,
                                 const CalibrationTargets& targets = {});

struct RateTargets {
  double exit_bp = 10.0;
  double entry_bp = -4.5;
};

struct InterestSensitivity {
  double alpha_c = 0.0;
  double alpha_e = 0.0;
  double exit_bp = 0.0;
  double entry_bp = 0.0;
  int evaluations = 0;
};

/// Impact entry/exit responses (bp) of the HF model at `ss` with the given
/// sensitivities; real-rate normalised.
std::pair<double, double> impact_rates(const SteadyState& ss, double alpha_c, double alpha_e);

/// Two-dimensional root-find on (alpha_c, alpha_e) for the impact exit and
/// entry responses. `ss` is the baseline stationary equilibrium.
InterestSensitivity calibrate_interest_sensitivity(const SteadyState& ss, const RateTargets& targets = {},
                                                   double tol_bp = 1e-3);

/// Recalibrates the economy at returns to scale `nu`, remapping the
/// productivity volatility from the same annual employment process.
ModelParams recalibrate_for_nu(const ModelParams& base, double nu, const CalibrationTargets& targets = {});

}  // namespace firmdyn

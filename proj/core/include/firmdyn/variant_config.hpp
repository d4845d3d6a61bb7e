#pragma once

#include <string>
#include <string_view>

namespace firmdyn {

/// Units in which fixed operating and entry cost draws are denominated.
enum class CostDenomination { final_good, labor, production_good };

std::string_view to_string(CostDenomination d);
CostDenomination parse_denomination(std::string_view name);

struct FreeEntryConfig {
  bool enabled = false;
  /// Entry cost at the stationary entrant mass; solved for when <= 0.
  double e_tilde = 0.0;
  /// Congestion slope of the cost schedule e_tilde*exp(alpha*(M_t - M)).
  double alpha = 15.0;
};

/// Structural switches layered on the baseline economy. Default-constructed
/// config is the baseline.
struct VariantConfig {
  CostDenomination denomination = CostDenomination::final_good;
  /// Entrants decide at t on the discounted continuation value and start
  /// producing at t+1.
  bool delayed_entry = false;
  /// Firms discount with beta instead of the household's stochastic discount factor.
  bool risk_neutral = false;
  /// Log-location shift of the operating / entry cost per unit of real-rate
  /// deviation from 1/beta.
  double alpha_c = 0.0;
  double alpha_e = 0.0;
  FreeEntryConfig free_entry;

  void validate() const;
  bool interest_sensitive() const { return alpha_c != 0.0 || alpha_e != 0.0; }
};

/// Named presets: baseline, labor_costs, production_costs, delayed_entry,
/// risk_neutral, free_entry. Throws ConfigError for unknown names.
VariantConfig variant_by_name(std::string_view name);

}  // namespace firmdyn

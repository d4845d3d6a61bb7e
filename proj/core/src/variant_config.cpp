#include "firmdyn/variant_config.hpp"

#include <cmath>
#include <string>

#include "firmdyn/errors.hpp"

namespace firmdyn {

std::string_view to_string(CostDenomination d) {
  switch (d) {
    case CostDenomination::labor:
      return "labor";
    case CostDenomination::production_good:
      return "production_good";
    case CostDenomination::final_good:
      break;
  }
  return "final_good";
}

CostDenomination parse_denomination(std::string_view name) {
  if (name == "final_good") return CostDenomination::final_good;
  if (name == "labor") return CostDenomination::labor;
  if (name == "production_good") return CostDenomination::production_good;
  throw ConfigError("unknown cost denomination '" + std::string(name) +
                    "' (expected final_good, labor or production_good)");
}

void VariantConfig::validate() const {
  if (!std::isfinite(alpha_c) || !std::isfinite(alpha_e)) {
    throw ConfigError("variant: interest-sensitivity coefficients must be finite");
  }
  if (free_entry.enabled) {
    if (!(free_entry.alpha > 0.0) || !std::isfinite(free_entry.alpha)) {
      throw ConfigError("variant: free-entry alpha must be positive");
    }
    if (!std::isfinite(free_entry.e_tilde) || free_entry.e_tilde < 0.0) {
      throw ConfigError("variant: free-entry e_tilde must be non-negative (0 = solve for it)");
    }
    if (delayed_entry) {
      throw ConfigError("variant: free entry and delayed entry cannot be combined");
    }
    if (alpha_e != 0.0) {
      throw ConfigError("variant: free entry has no entry-cost distribution to shift (alpha_e must be 0)");
    }
  }
}

VariantConfig variant_by_name(std::string_view name) {
  VariantConfig v;
  if (name == "baseline") {
  } else if (name == "labor_costs") {
    v.denomination = CostDenomination::labor;
  } else if (name == "production_costs") {
    v.denomination = CostDenomination::production_good;
  } else if (name == "delayed_entry") {
    v.delayed_entry = true;
  } else if (name == "risk_neutral") {
    v.risk_neutral = true;
  } else if (name == "free_entry") {
    v.free_entry.enabled = true;
  } else {
    throw ConfigError("unknown variant '" + std::string(name) +
                      "' (expected baseline, labor_costs, production_costs, delayed_entry, risk_neutral, "
                      "free_entry)");
  }
  return v;
}

}  // namespace firmdyn

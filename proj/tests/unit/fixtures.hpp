#pragma once

#include "firmdyn/dynamics.hpp"
#include "firmdyn/equilibrium.hpp"

namespace firmdyn::fixture {

// Calibrated baseline economy, solved once per test binary.
inline const SteadyState& baseline_steady() {
  static const SteadyState ss = solve_stationary_equilibrium(ModelParams::calibrated());
  return ss;
}

inline const HfModel& baseline_hf() {
  static const HfModel hf = solve_hf(baseline_steady());
  return hf;
}

inline const IrfSet& baseline_irf(int horizon = 40) {
  static const IrfSet irf40 = [] {
    IrfOptions o;
    o.horizon = 40;
    return impulse_response(baseline_hf().system, baseline_hf().solution, o);
  }();
  static const IrfSet irf200 = [] {
    IrfOptions o;
    o.horizon = 200;
    return impulse_response(baseline_hf().system, baseline_hf().solution, o);
  }();
  return horizon <= 40 ? irf40 : irf200;
}

}  // namespace firmdyn::fixture

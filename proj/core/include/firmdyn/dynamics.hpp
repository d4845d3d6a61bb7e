#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "firmdyn/equilibrium.hpp"
#include "firmdyn/firm.hpp"
#include "firmdyn/linear_re.hpp"

namespace firmdyn {

/// Positions of the endogenous variables in the state vector.
///
/// value(i): log V(z_i); incumbent(i): mass of incumbents carried from t into
/// t+1 in units of the stationary firm mass; then logs of N, C, w, R, Pi, p, Y;
/// under free entry, log of the entrant mass last.
struct SystemLayout {
  int k = 0;
  bool free_entry = false;

  int size() const { return 2 * k + 7 + (free_entry ? 1 : 0); }
  int value(int i) const { return i; }
  int incumbent(int i) const { return k + i; }
  int employment() const { return 2 * k; }
  int consumption() const { return 2 * k + 1; }
  int wage() const { return 2 * k + 2; }
  int nominal_rate() const { return 2 * k + 3; }
  int inflation() const { return 2 * k + 4; }
  int rel_price() const { return 2 * k + 5; }
  int output() const { return 2 * k + 6; }
  int entrants() const { return 2 * k + 7; }
};

/// Levels of everything dated t, given states at t-1, t and t+1.
struct PeriodState {
  Eigen::VectorXd value;
  Eigen::VectorXd incumbents;  // carried into t+1
  double employment = 0.0, consumption = 0.0, wage = 0.0, nominal_rate = 0.0, inflation = 0.0,
         rel_price = 0.0, output = 0.0;
  double entrant_scale = 0.0;  // M, or the actual entrant mass under free entry
  double consumption_next = 0.0, inflation_next = 0.0, output_next = 0.0;
  double sdf = 0.0;             // household Lambda_{t,t+1}
  double real_rate_gap = 0.0;   // R_t/Pi_{t+1} - 1/beta
  Prices prices;
  FirmSolution firm;
  Eigen::VectorXd entrant_flow;  // entrants deciding at t: M G_e q
  Eigen::VectorXd operating;     // mu_t
  Eigen::VectorXd carried;       // pre-transition mass feeding incumbents
  double exiting_mass = 0.0;
  double transfers = 0.0;
  double dividends = 0.0;
};

/// The nonlinear equilibrium conditions in (lag, current, lead) form around a
/// stationary equilibrium. Rows: Bellman (k, scaled by V_ss), incumbent
/// transition (k, scaled by Gamma_ss), employment, labour supply, Euler,
/// Taylor rule, Phillips curve, output, goods clearing, [free entry].
class EquilibriumSystem {
 public:
  explicit EquilibriumSystem(const SteadyState& ss);

  const SystemLayout& layout() const { return layout_; }
  int size() const { return layout_.size(); }
  const SteadyState& steady() const { return ss_; }
  /// State vector of the stationary equilibrium in model coordinates.
  const Eigen::VectorXd& steady_vector() const { return x_ss_; }
  double stationary_mass() const { return gamma_ss_; }

  PeriodState evaluate(const Eigen::VectorXd& lag, const Eigen::VectorXd& cur, const Eigen::VectorXd& lead,
                       double shock) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& lag, const Eigen::VectorXd& cur, const Eigen::VectorXd& lead,
                           double shock) const;

 private:
  SteadyState ss_;
  SystemLayout layout_;
  Eigen::VectorXd x_ss_;
  Eigen::VectorXd value_ss_;
  double gamma_ss_ = 0.0;
  double e_tilde_ = 0.0;
};

EquilibriumSystem build_system(const SteadyState& ss);

/// Central finite differences of the residuals at the steady state.
LinearSystem linearize(const EquilibriumSystem& system, double step = 1e-6);

struct Normalization {
  enum class Kind { real_rate, shock };
  Kind kind = Kind::real_rate;
  /// Impact ex ante real rate in quarterly log units, or the raw shock size.
  double target = 0.01;

  std::string describe() const;
};

struct SeriesSummary {
  double impact = 0.0;
  double peak = 0.0;
  int peak_horizon = 0;
  double autocorr4 = 0.0;
};

/// Impulse responses on a common schema. Rows are horizons 0..H; columns are
/// canonical_irf_columns(). Percent log deviations, except entry/exit rates
/// in basis points.
struct IrfSet {
  std::string model;
  std::vector<std::string> columns;
  Eigen::MatrixXd data;
  double shock_scale = 0.0;
  std::string normalization;
  std::map<std::string, SeriesSummary> summary;
  /// Deviations of the state vector, rows 0..H+1 (heterogeneous-firm model only).
  Eigen::MatrixXd states;
  /// Period-by-period levels, 0..H (heterogeneous-firm model only).
  std::vector<PeriodState> path;

  int horizon() const { return static_cast<int>(data.rows()) - 1; }
  Eigen::VectorXd column(const std::string& name) const;
};

const std::vector<std::string>& canonical_irf_columns();

/// sum_h psi_h psi_{h+4} / sum_h psi_h^2.
double autocorrelation4(const Eigen::VectorXd& response);

/// Computes the summary table (impact, peak, AC4) from full-length series.
std::map<std::string, SeriesSummary> summarize(const std::vector<std::string>& columns,
                                               const Eigen::MatrixXd& data);

struct IrfOptions {
  int horizon = 40;
  /// Horizon used for the autocorrelation summaries.
  int summary_horizon = 4000;
  Normalization normalization;
};

IrfSet impulse_response(const EquilibriumSystem& system, const LinearSolution& solution,
                        const IrfOptions& options = {});

/// Linearise and solve; throws IndeterminacyError when Blanchard-Kahn fails.
struct HfModel {
  EquilibriumSystem system;
  LinearSystem linear;
  LinearSolution solution;
};
HfModel solve_hf(const SteadyState& ss, const LinearReOptions& options = {});

}  // namespace firmdyn

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "firmdyn/dynamics.hpp"
#include "firmdyn/equilibrium.hpp"
#include "firmdyn/firm.hpp"

namespace firmdyn {

/// BED-style rates: exit_t = exiting_t / avg(Gamma_t, Gamma_t+1),
/// entry_t = entrants_t / avg(Gamma_t-1, Gamma_t). Rates are fractions.
struct RatePath {
  Eigen::VectorXd entry_rate;
  Eigen::VectorXd exit_rate;
  Eigen::VectorXd entrant_mass;
  Eigen::VectorXd exiting_mass;
  Eigen::VectorXd mass;  // Gamma_t
};

/// `measures` holds mu_0..mu_T; rates are reported for t = 0..T-1.
/// `initial_mass` is Gamma_{-1}; pass a negative value to use Gamma_0.
RatePath measure_rates(const std::vector<Eigen::VectorXd>& measures, const std::vector<FirmSolution>& solutions,
                       double entrant_mass, const MarkovChain& chain, double initial_mass = -1.0);

struct TfpPath {
  Eigen::VectorXd mass;               // Gamma_t
  Eigen::VectorXd productivity;       // E_z(z^(1/(1-nu))) under mu_t / Gamma_t
  Eigen::VectorXd tfp;                // A_t
};

TfpPath tfp_path(const std::vector<Eigen::VectorXd>& measures, const Eigen::VectorXd& log_grid, double nu);

/// Firms' perfect-foresight response to a price path, starting from the
/// stationary incumbent measure.
struct ForesightRun {
  std::vector<FirmSolution> solutions;  // t = 0..T
  std::vector<Eigen::VectorXd> measures;  // operating mu_t, t = 0..T
  RatePath rates;                         // t = 0..T-1
  Eigen::VectorXd employment;             // t = 0..T
};

ForesightRun simulate_foresight(const SteadyState& ss, const std::vector<Prices>& price_path);

/// Constant stationary prices over t = 0..T.
std::vector<Prices> stationary_price_path(const SteadyState& ss, int horizon);

/// Price paths implied by a response set. `irf` holds percent deviations on
/// the common schema; channels select which prices move (others stay at the
/// steady state, with sdf = beta when r is held).
std::vector<Prices> price_path_from_irf(const SteadyState& ss, const IrfSet& irf, bool move_r, bool move_w,
                                        bool move_p);

/// Entry/exit-rate responses (basis points) with one price moving at a time.
struct Contribution {
  std::string channel;  // total, r, w, p
  Eigen::VectorXd exit_bp;
  Eigen::VectorXd entry_bp;
};

/// Uses the IRF's own horizon as the foresight horizon T; prices must be
/// back within 1e-6 of the steady state at T.
std::vector<Contribution> price_contributions(const IrfSet& irf, const SteadyState& ss);

struct EmploymentGap {
  Eigen::VectorXd rf_prices_gap;    // HF labour demand at RF prices minus RF employment (pp)
  Eigen::VectorXd equilibrium_gap;  // HF minus RF equilibrium employment (pp)
};

EmploymentGap employment_gap_rf_prices(const IrfSet& rf_irf, const IrfSet& hf_irf, const SteadyState& ss);

/// mu_h/Gamma_h - mu_ss/Gamma_ss for each horizon; columns follow `horizons`.
Eigen::MatrixXd distribution_shift(const std::vector<Eigen::VectorXd>& measures, const Eigen::VectorXd& stationary,
                                   const std::vector<int>& horizons);

/// Operating measures mu_t along an IRF path.
std::vector<Eigen::VectorXd> irf_measures(const IrfSet& irf);

/// Entry and exit probabilities by productivity, at the stationary
/// equilibrium and with one price permanently moved by `log_change`.
struct ProbabilityProfiles {
  Eigen::VectorXd log_z;
  std::vector<std::string> scenarios;  // stationary, r_up, w_up, p_up
  Eigen::MatrixXd exit_prob;           // k x scenarios
  Eigen::MatrixXd entry_prob;
};

ProbabilityProfiles probability_profiles(const SteadyState& ss, double log_change = 0.01);

/// Stationary distribution by employment size class.
struct SizeProfile {
  std::vector<double> lower;  // class lower bounds (employees)
  std::vector<double> firm_share;
  std::vector<double> employment_share;
  std::vector<double> entry_rate;
  std::vector<double> exit_rate;
};

/// Default classes follow the usual 1-4, 5-9, ..., 1000+ establishment bins.
SizeProfile size_profile(const SteadyState& ss, std::vector<double> lower_bounds = {});

}  // namespace firmdyn

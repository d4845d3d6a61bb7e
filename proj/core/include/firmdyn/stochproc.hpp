#pragma once

#include <Eigen/Dense>

namespace firmdyn {

/// AR(1) in logs: x' = mean*(1-persistence) + persistence*x + e, e ~ N(0, innovation_sd^2).
struct AR1Spec {
  double persistence = 0.0;
  double innovation_sd = 0.0;
  double mean = 0.0;

  void validate() const;
  double unconditional_sd() const;
};

/// Discrete Markov chain on an evenly spaced log-productivity grid.
///
/// `transition(i, j)` is Pr(z' = z_j | z = z_i); `entrant_dist` is the
/// distribution from which potential entrants draw.
struct MarkovChain {
  Eigen::VectorXd log_grid;
  Eigen::MatrixXd transition;
  Eigen::VectorXd entrant_dist;

  int size() const { return static_cast<int>(log_grid.size()); }
  Eigen::VectorXd levels() const { return log_grid.array().exp(); }

  /// Throws std::invalid_argument when rows/entrant weights are not
  /// probability vectors (within 1e-12) or the grid is not increasing.
  void validate() const;

  /// Single-state chain; used for degenerate test economies.
  static MarkovChain point(double log_z);
};

struct LognormalSpec {
  double location = 0.0;
  double scale = 1.0;

  void validate() const;
  double mean() const;
};

/// Rouwenhorst discretisation (Kopecky-Suen recursion). The grid spans
/// mean +/- sd_uncond*sqrt(k-1); entrants draw from the chain's stationary
/// distribution, which is binomial(k-1, 1/2).
MarkovChain rouwenhorst(const AR1Spec& spec, int k);

/// Stationary distribution pi = pi P of a row-stochastic matrix.
Eigen::VectorXd chain_stationary(const Eigen::MatrixXd& transition);

struct QuarterlyProcess {
  double persistence;
  double innovation_sd;
};

/// Maps an annual AR(1) for log employment into the quarterly log-productivity
/// process: rho_z = rho_n^(1/4), sigma_z = |nu-1| sqrt(sigma_n^2 / sum_{j<4} rho_z^(2j)).
QuarterlyProcess quarterly_from_annual(double annual_persistence, double annual_sd, double nu);

double normal_cdf(double x);
/// log Phi(x), accurate deep in the lower tail where Phi underflows.
double log_normal_cdf(double x);

double lognormal_cdf(const LognormalSpec& spec, double x);

/// E[x | x <= cap] for x ~ LN(location, scale). Requires cap > 0.
double truncated_lognormal_mean(const LognormalSpec& spec, double cap);

/// E[x 1{x <= cap}] = truncated mean times cdf; zero for cap <= 0.
double lognormal_partial_mean(const LognormalSpec& spec, double cap);

}  // namespace firmdyn

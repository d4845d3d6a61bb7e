#include "firmdyn/stochproc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "firmdyn/errors.hpp"

namespace firmdyn {

void AR1Spec::validate() const {
  if (!(std::abs(persistence) < 1.0)) {
    throw std::invalid_argument("AR1Spec: |persistence| must be < 1");
  }
  if (!(innovation_sd > 0.0)) {
    throw std::invalid_argument("AR1Spec: innovation_sd must be > 0");
  }
  if (!std::isfinite(mean)) {
    throw std::invalid_argument("AR1Spec: mean must be finite");
  }
}

double AR1Spec::unconditional_sd() const {
  return innovation_sd / std::sqrt(1.0 - persistence * persistence);
}

void MarkovChain::validate() const {
  const int k = size();
  if (k < 1 || transition.rows() != k || transition.cols() != k || entrant_dist.size() != k) {
    throw std::invalid_argument("MarkovChain: inconsistent dimensions");
  }
  for (int i = 0; i < k; ++i) {
    if ((transition.row(i).array() < 0.0).any() || (transition.row(i).array() > 1.0).any()) {
      throw std::invalid_argument("MarkovChain: transition entries outside [0,1]");
    }
    if (std::abs(transition.row(i).sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("MarkovChain: row " + std::to_string(i) + " does not sum to 1");
    }
  }
  if ((entrant_dist.array() < 0.0).any() || std::abs(entrant_dist.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("MarkovChain: entrant distribution is not a probability vector");
  }
  for (int i = 1; i < k; ++i) {
    if (!(log_grid[i] > log_grid[i - 1])) {
      throw std::invalid_argument("MarkovChain: grid must be strictly increasing");
    }
  }
}

MarkovChain MarkovChain::point(double log_z) {
  MarkovChain chain;
  chain.log_grid = Eigen::VectorXd::Constant(1, log_z);
  chain.transition = Eigen::MatrixXd::Ones(1, 1);
  chain.entrant_dist = Eigen::VectorXd::Ones(1);
  return chain;
}

void LognormalSpec::validate() const {
  if (!(scale > 1e-12)) {
    throw std::invalid_argument("LognormalSpec: scale must exceed 1e-12");
  }
  if (!std::isfinite(location)) {
    throw std::invalid_argument("LognormalSpec: location must be finite");
  }
}

double LognormalSpec::mean() const { return std::exp(location + 0.5 * scale * scale); }

MarkovChain rouwenhorst(const AR1Spec& spec, int k) {
  if (k < 2) {
    throw std::invalid_argument("rouwenhorst: need at least two grid points");
  }
  spec.validate();

  const double p = 0.5 * (1.0 + spec.persistence);
  Eigen::MatrixXd theta(2, 2);
  theta << p, 1.0 - p, 1.0 - p, p;

  for (int n = 3; n <= k; ++n) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    next.topLeftCorner(n - 1, n - 1) += p * theta;
    next.topRightCorner(n - 1, n - 1) += (1.0 - p) * theta;
    next.bottomLeftCorner(n - 1, n - 1) += (1.0 - p) * theta;
    next.bottomRightCorner(n - 1, n - 1) += p * theta;
    next.middleRows(1, n - 2) *= 0.5;
    theta = std::move(next);
  }

  MarkovChain chain;
  const double half_span = spec.unconditional_sd() * std::sqrt(static_cast<double>(k - 1));
  chain.log_grid = Eigen::VectorXd::LinSpaced(k, spec.mean - half_span, spec.mean + half_span);
  chain.transition = std::move(theta);

  // binomial(k-1, 1/2) weights, built in log space to stay exact for large k
  chain.entrant_dist.resize(k);
  const double n = static_cast<double>(k - 1);
  for (int i = 0; i < k; ++i) {
    const double log_w = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                         n * std::numbers::ln2;
    chain.entrant_dist[i] = std::exp(log_w);
  }
  chain.entrant_dist /= chain.entrant_dist.sum();
  return chain;
}

Eigen::VectorXd chain_stationary(const Eigen::MatrixXd& transition) {
  const auto k = transition.rows();
  if (k == 0 || transition.cols() != k) {
    throw std::invalid_argument("chain_stationary: transition must be square and non-empty");
  }
  // (P' - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd system = transition.transpose() - Eigen::MatrixXd::Identity(k, k);
  system.row(k - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  rhs[k - 1] = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw ConvergenceError("chain_stationary: chain is reducible, stationary distribution is not unique");
  }
  Eigen::VectorXd pi = lu.solve(rhs);
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();

  const double residual = (transition.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (!(residual < 1e-10)) {
    throw ConvergenceError("chain_stationary: fixed-point residual " + std::to_string(residual));
  }
  return pi;
}

QuarterlyProcess quarterly_from_annual(double annual_persistence, double annual_sd, double nu) {
  if (!(annual_persistence > 0.0 && annual_persistence < 1.0)) {
    throw std::invalid_argument("quarterly_from_annual: annual persistence must lie in (0,1)");
  }
  if (!(annual_sd > 0.0)) {
    throw std::invalid_argument("quarterly_from_annual: annual sd must be positive");
  }
  if (!(nu > 0.0 && nu < 1.0)) {
    throw std::invalid_argument("quarterly_from_annual: nu must lie in (0,1)");
  }
  const double rho = std::pow(annual_persistence, 0.25);
  double geometric = 0.0;
  for (int j = 0; j < 4; ++j) {
    geometric += std::pow(rho, 2.0 * j);
  }
  return {rho, std::abs(nu - 1.0) * std::sqrt(annual_sd * annual_sd / geometric)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_normal_cdf(double x) {
  if (x > -30.0) {
    return std::log(normal_cdf(x));
  }
  // Asymptotic Mills-ratio expansion; relative error below 1e-12 for x <= -30.
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double lognormal_cdf(const LognormalSpec& spec, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  return normal_cdf((std::log(x) - spec.location) / spec.scale);
}

double truncated_lognormal_mean(const LognormalSpec& spec, double cap) {
  if (!(cap > 0.0)) {
    throw std::invalid_argument("truncated_lognormal_mean: cap must be positive");
  }
  const double a = (std::log(cap) - spec.location) / spec.scale;
  const double log_ratio = log_normal_cdf(a - spec.scale) - log_normal_cdf(a);
  return std::exp(spec.location + 0.5 * spec.scale * spec.scale + log_ratio);
}

double lognormal_partial_mean(const LognormalSpec& spec, double cap) {
  if (cap <= 0.0) {
    return 0.0;
  }
  const double a = (std::log(cap) - spec.location) / spec.scale;
  return spec.mean() * normal_cdf(a - spec.scale);
}

}  // namespace firmdyn

#include "firmdyn/rfmodel.hpp"

#include <cmath>

#include "firmdyn/errors.hpp"

namespace firmdyn {

RFParams RFParams::from(const ModelParams& p) {
  return {p.beta, p.sigma, p.kappa1, p.nu, p.gamma, p.xi, p.phi, p.rho_m};
}

void RFParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0) || !(sigma > 0.0) || !(kappa1 >= 0.0) || !(nu > 0.0 && nu <= 1.0) ||
      !(gamma > 1.0) || !(xi > 0.0) || !(rho_m >= 0.0 && rho_m < 1.0)) {
    throw ConfigError("RFParams: parameter out of range");
  }
}

double RFParams::slope() const { return (gamma - 1.0) / xi * (sigma + (kappa1 + 1.0) / nu - 1.0); }

RFSolution solve_rf(const RFParams& params) {
  params.validate();
  if (!(params.phi > 1.0)) {
    throw IndeterminacyError("solve_rf: Taylor principle violated (phi <= 1)", -1, -1);
  }
  RFSolution s;
  s.params = params;
  s.kappa = params.slope();
  const double rho = params.rho_m;
  const double c = s.kappa / (1.0 - params.beta * rho);
  s.a_y = -1.0 / (params.sigma * (1.0 - rho) + (params.phi - rho) * c);
  s.a_pi = c * s.a_y;
  s.a_R = params.phi * s.a_pi + 1.0;
  s.a_r = s.a_R - rho * s.a_pi;

  s.a_n = s.a_y / params.nu;
  s.a_w = params.sigma * s.a_y + params.kappa1 * s.a_n;
  s.a_p = s.a_w + (1.0 - params.nu) * s.a_n;
  // D = Y - wN with wN = nu p Y in the steady state
  const double p_ss = (params.gamma - 1.0) / params.gamma;
  const double labor_share = params.nu * p_ss;
  s.a_d = (s.a_y - labor_share * (s.a_w + s.a_n)) / (1.0 - labor_share);
  return s;
}

LinearSystem rf_linear_system(const RFParams& p) {
  p.validate();
  LinearSystem sys;
  sys.A = Eigen::MatrixXd::Zero(3, 3);
  sys.B = Eigen::MatrixXd::Zero(3, 3);
  sys.C = Eigen::MatrixXd::Zero(3, 3);
  sys.D = Eigen::VectorXd::Zero(3);
  // y_t - y_{t+1} + (R_t - pi_{t+1}) / sigma = 0
  sys.B(0, 0) = 1.0;
  sys.B(0, 2) = 1.0 / p.sigma;
  sys.A(0, 0) = -1.0;
  sys.A(0, 1) = -1.0 / p.sigma;
  // pi_t - beta pi_{t+1} - kappa y_t = 0
  sys.B(1, 1) = 1.0;
  sys.B(1, 0) = -p.slope();
  sys.A(1, 1) = -p.beta;
  // R_t - phi pi_t - eps_t = 0
  sys.B(2, 2) = 1.0;
  sys.B(2, 1) = -p.phi;
  sys.D(2) = -1.0;
  return sys;
}

IrfSet rf_irf(const RFSolution& sol, const IrfOptions& options) {
  if (options.horizon < 1 || options.summary_horizon < 8) {
    throw std::invalid_argument("rf_irf: horizon too short");
  }
  const double rho = sol.params.rho_m;
  double scale = options.normalization.target;
  if (options.normalization.kind == Normalization::Kind::real_rate) {
    scale /= sol.a_r;
  }

  IrfSet irf;
  irf.model = "rf";
  irf.columns = canonical_irf_columns();
  irf.shock_scale = scale;
  irf.normalization = options.normalization.describe();

  const int hs = std::max(options.horizon, options.summary_horizon);
  const Eigen::Index ncol = static_cast<Eigen::Index>(irf.columns.size());
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(hs + 1, ncol);
  double decay = 100.0 * scale;
  for (int t = 0; t <= hs; ++t) {
    // real rate: R_t - pi_{t+1} = (a_R - rho a_pi) rho^t
    data.row(t) << sol.a_y * decay, sol.a_y * decay, sol.a_n * decay, sol.a_w * decay, sol.a_p * decay,
        sol.a_pi * decay, sol.a_R * decay, sol.a_r * decay, 0.0, 0.0, 0.0, 0.0, sol.a_d * decay;
    decay *= rho;
  }
  irf.summary = summarize(irf.columns, data);
  irf.data = data.topRows(options.horizon + 1);
  return irf;
}

}  // namespace firmdyn

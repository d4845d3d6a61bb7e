#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "firmdyn/analysis.hpp"
#include "firmdyn/dynamics.hpp"
#include "firmdyn/errors.hpp"
#include "fixtures.hpp"

using namespace firmdyn;

namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Eleven equilibrium conditions of a two-point economy written out by hand.
// State: log V1, log V2, iota1, iota2 (shares of Gamma_ss), log N, C, w, R, Pi, p, Y.
Eigen::VectorXd hand_residual(const SteadyState& ss, double gamma_ss, const Eigen::VectorXd& lag,
                              const Eigen::VectorXd& cur, const Eigen::VectorXd& lead, double eps) {
  const ModelParams& m = ss.params;
  const double mu_c = m.operating_cost.location, s_c = m.operating_cost.scale;
  const double mu_e = m.entry_cost.location, s_e = m.entry_cost.scale;
  const double z1 = std::exp(ss.chain.log_grid(0)), z2 = std::exp(ss.chain.log_grid(1));
  const double P11 = ss.chain.transition(0, 0), P12 = ss.chain.transition(0, 1);
  const double P21 = ss.chain.transition(1, 0), P22 = ss.chain.transition(1, 1);
  const double q1 = ss.chain.entrant_dist(0), q2 = ss.chain.entrant_dist(1);

  const double V1 = std::exp(cur(0)), V2 = std::exp(cur(1));
  const double V1n = std::exp(lead(0)), V2n = std::exp(lead(1));
  const double i1 = cur(2) * gamma_ss, i2 = cur(3) * gamma_ss;
  const double i1l = lag(2) * gamma_ss, i2l = lag(3) * gamma_ss;
  const double N = std::exp(cur(4)), C = std::exp(cur(5)), w = std::exp(cur(6)), R = std::exp(cur(7));
  const double Pi = std::exp(cur(8)), p = std::exp(cur(9)), Y = std::exp(cur(10));
  const double Cn = std::exp(lead(5)), Pin = std::exp(lead(8)), Yn = std::exp(lead(10));

  const double sdf = m.beta * std::pow(Cn / C, -m.sigma);
  const double n1 = std::pow(m.nu * p * z1 / w, 1.0 / (1.0 - m.nu));
  const double n2 = std::pow(m.nu * p * z2 / w, 1.0 / (1.0 - m.nu));
  const double prof1 = p * z1 * std::pow(n1, m.nu) - w * n1;
  const double prof2 = p * z2 * std::pow(n2, m.nu) - w * n2;
  const double c1 = sdf * (P11 * V1n + P12 * V2n);
  const double c2 = sdf * (P21 * V1n + P22 * V2n);
  auto G = [](double x, double mu, double s) { return Phi((std::log(x) - mu) / s); };
  auto partial = [](double x, double mu, double s) {
    return std::exp(mu + 0.5 * s * s) * Phi((std::log(x) - mu - s * s) / s);
  };
  const double g1 = G(c1, mu_c, s_c), g2 = G(c2, mu_c, s_c);
  const double e1 = G(V1, mu_e, s_e), e2 = G(V2, mu_e, s_e);

  const double mu1 = i1l + m.entrant_mass * e1 * q1;
  const double mu2 = i2l + m.entrant_mass * e2 * q2;

  Eigen::VectorXd r(11);
  r(0) = (V1 - (prof1 + c1 * g1 - partial(c1, mu_c, s_c))) / ss.firm.value(0);
  r(1) = (V2 - (prof2 + c2 * g2 - partial(c2, mu_c, s_c))) / ss.firm.value(1);
  r(2) = (i1 - (P11 * g1 * mu1 + P21 * g2 * mu2)) / gamma_ss;
  r(3) = (i2 - (P12 * g1 * mu1 + P22 * g2 * mu2)) / gamma_ss;
  r(4) = 1.0 - (n1 * mu1 + n2 * mu2) / N;
  r(5) = 1.0 - m.kappa0 * std::pow(C, m.sigma) * std::pow(N, m.kappa1) / w;
  r(6) = sdf * R / Pin - 1.0;
  r(7) = std::pow(Pi, m.phi) * std::exp(eps) - R * m.beta;
  r(8) = (1.0 - m.gamma) + m.gamma * p - m.xi * (Pi - 1.0) * Pi + m.xi * sdf * (Pin - 1.0) * Pin * Yn / Y;
  r(9) = 1.0 - (z1 * std::pow(n1, m.nu) * mu1 + z2 * std::pow(n2, m.nu) * mu2) / Y;
  r(10) = 1.0 - (C + 0.5 * m.xi * (Pi - 1.0) * (Pi - 1.0) * Y) / Y;
  return r;
}

SteadyState two_point_economy() {
  ModelParams p = ModelParams::calibrated();
  p.grid_size = 2;
  p.operating_cost = {-1.0, 1.5};
  p.entry_cost = {-0.5, 1.5};
  return solve_stationary_equilibrium(p);
}

}  // namespace

TEST(System, SteadyStateResidualVanishes) {
  const EquilibriumSystem& sys = fixture::baseline_hf().system;
  const Eigen::VectorXd& x = sys.steady_vector();
  EXPECT_LT(sys.residual(x, x, x, 0.0).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(sys.size(), 2 * 50 + 7);
}

TEST(System, NominalRateSigns) {
  const EquilibriumSystem& sys = fixture::baseline_hf().system;
  const SystemLayout& L = sys.layout();
  const Eigen::VectorXd& x = sys.steady_vector();
  Eigen::VectorXd up = x;
  up(L.nominal_rate()) += 1e-4;
  const Eigen::VectorXd r = sys.residual(x, up, x, 0.0);
  const int euler = 2 * L.k + 2, taylor = 2 * L.k + 3;
  EXPECT_GT(r(euler), 0.0);
  EXPECT_LT(r(taylor), 0.0);
}

TEST(System, MatchesHandCodedTwoPointEvaluator) {
  const SteadyState ss = two_point_economy();
  const EquilibriumSystem sys(ss);
  ASSERT_EQ(sys.size(), 11);
  const Eigen::VectorXd& x = sys.steady_vector();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1e-2, 1e-2);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd lag = x, cur = x, lead = x;
    for (int i = 0; i < 11; ++i) {
      lag(i) += u(rng);
      cur(i) += u(rng);
      lead(i) += u(rng);
    }
    const double eps = u(rng);
    const Eigen::VectorXd a = sys.residual(lag, cur, lead, eps);
    const Eigen::VectorXd b = hand_residual(ss, sys.stationary_mass(), lag, cur, lead, eps);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12) << "rep " << rep;
  }
}

TEST(Linearize, TaylorRowDerivatives) {
  const HfModel& hf = fixture::baseline_hf();
  const SystemLayout& L = hf.system.layout();
  const int taylor = 2 * L.k + 3;
  const double phi = hf.system.steady().params.phi;
  // residual Pi^phi e^eps - beta R in log deviations: d/dlog Pi = phi, d/dlog R = -1
  EXPECT_NEAR(hf.linear.B(taylor, L.inflation()), phi, 1e-8);
  EXPECT_NEAR(hf.linear.B(taylor, L.nominal_rate()), -1.0, 1e-8);
  EXPECT_NEAR(hf.linear.D(taylor), 1.0, 1e-8);
}

TEST(Linearize, IncumbentRowsAreSurvivalWeightedTransitions) {
  const HfModel& hf = fixture::baseline_hf();
  const SystemLayout& L = hf.system.layout();
  const SteadyState& ss = hf.system.steady();
  for (int i = 0; i < L.k; i += 7) {
    EXPECT_NEAR(hf.linear.B(L.incumbent(i), L.incumbent(i)), 1.0, 1e-8);
    for (int j = 0; j < L.k; j += 5) {
      const double expected = -ss.chain.transition(j, i) * ss.firm.continue_prob(j);
      EXPECT_NEAR(hf.linear.C(L.incumbent(i), L.incumbent(j)), expected, 1e-8) << i << "," << j;
    }
  }
}

TEST(Linearize, StepRobust) {
  const EquilibriumSystem& sys = fixture::baseline_hf().system;
  const LinearSystem a = linearize(sys, 1e-6);
  const LinearSystem b = linearize(sys, 2e-6);
  auto rel = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return (x - y).cwiseAbs().maxCoeff() / std::max(1.0, x.cwiseAbs().maxCoeff());
  };
  EXPECT_LT(rel(a.A, b.A), 1e-5);
  EXPECT_LT(rel(a.B, b.B), 1e-5);
  EXPECT_LT(rel(a.C, b.C), 1e-5);
}

TEST(Irf, BaselineOutputAndRates) {
  const IrfSet& irf = fixture::baseline_irf();
  EXPECT_NEAR(irf.column("output")(0), -2.0023, 0.05);
  EXPECT_NEAR(irf.column("real_rate")(0), 1.0, 1e-10);
  EXPECT_NEAR(irf.column("exit_rate_bp")(0), 2.5, 1.0);
  EXPECT_LT(irf.column("entry_rate_bp")(0), 0.0);
  EXPECT_GT(irf.column("entry_rate_bp")(0), -1.0);
  EXPECT_NEAR(irf.column("gamma")(20), -0.03, 0.015);
  EXPECT_NEAR(irf.summary.at("output").autocorr4, 0.064, 0.003);
  EXPECT_LT(irf.column("tfp")(0), 0.0);
  EXPECT_NEAR(irf.summary.at("tfp").autocorr4, 0.95, 0.03);
}

// Derived series are differentiated numerically, so scaling holds to rounding of that step.
TEST(Irf, CertaintyEquivalence) {
  const HfModel& hf = fixture::baseline_hf();
  IrfOptions o;
  o.normalization.kind = Normalization::Kind::shock;
  o.normalization.target = 0.01;
  const IrfSet one = impulse_response(hf.system, hf.solution, o);
  o.normalization.target = 0.02;
  const IrfSet two = impulse_response(hf.system, hf.solution, o);
  for (Eigen::Index c = 0; c < one.data.cols(); ++c) {
    const double scale = one.data.col(c).cwiseAbs().maxCoeff();
    EXPECT_LT((two.data.col(c) - 2.0 * one.data.col(c)).cwiseAbs().maxCoeff(), 1e-7 * scale + 1e-14)
        << one.columns[static_cast<std::size_t>(c)];
  }
  EXPECT_LT((two.states - 2.0 * one.states).cwiseAbs().maxCoeff(), 1e-15);
}

// The firm mass and TFP are slow-moving; all series fall below 10% of their peak.
TEST(Irf, PathsDecay) {
  const IrfSet& irf = fixture::baseline_irf(200);
  for (Eigen::Index c = 0; c < irf.data.cols(); ++c) {
    const double scale = irf.data.col(c).cwiseAbs().maxCoeff();
    EXPECT_LT(std::abs(irf.data(200, c)), 0.1 * scale + 1e-12) << irf.columns[static_cast<std::size_t>(c)];
  }
}

TEST(Irf, ProductivityDistributionShiftsUp) {
  const IrfSet& irf = fixture::baseline_irf();
  const SteadyState& ss = fixture::baseline_steady();
  const TfpPath path = tfp_path(irf_measures(irf), ss.chain.log_grid, ss.params.nu);
  const TfpPath base = tfp_path({ss.measure.mass}, ss.chain.log_grid, ss.params.nu);
  EXPECT_LT(path.tfp(1), base.tfp(0));
  EXPECT_GT(path.productivity(1), base.productivity(0));
}

TEST(Irf, LinearSystemHoldsAlongThePath) {
  const HfModel& hf = fixture::baseline_hf();
  const IrfSet& irf = fixture::baseline_irf();
  const double rho = hf.solution.shock_persistence;
  for (int t = 1; t < 40; ++t) {
    const Eigen::VectorXd r = hf.linear.A * irf.states.row(t + 1).transpose() +
                              hf.linear.B * irf.states.row(t).transpose() +
                              hf.linear.C * irf.states.row(t - 1).transpose() +
                              hf.linear.D * irf.shock_scale * std::pow(rho, t);
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-9) << "t=" << t;
  }
}

TEST(Determinacy, PassiveTaylorRuleIsIndeterminate) {
  ModelParams p = ModelParams::calibrated();
  p.phi = 0.9;
  const SteadyState ss = solve_stationary_equilibrium(p);
  try {
    solve_hf(ss);
    FAIL() << "expected IndeterminacyError";
  } catch (const IndeterminacyError& e) {
    EXPECT_EQ(e.required_stable(), 107);
    EXPECT_GT(e.stable_roots(), 107);
  }
}

TEST(Irf, ColumnLookup) {
  const IrfSet& irf = fixture::baseline_irf();
  EXPECT_EQ(irf.columns, canonical_irf_columns());
  EXPECT_THROW(irf.column("nonsense"), std::out_of_range);
  EXPECT_EQ(irf.horizon(), 40);
}

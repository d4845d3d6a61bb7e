#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "firmdyn/errors.hpp"
#include "firmdyn/linear_re.hpp"
#include "firmdyn/rfmodel.hpp"
#include "fixtures.hpp"

using namespace firmdyn;

namespace {

// x_t = a E x_{t+1} + c x_{t-1} + d eps_t
LinearSystem scalar(double a, double c, double d = 0.0) {
  LinearSystem s;
  s.A = Eigen::MatrixXd::Constant(1, 1, a);
  s.B = Eigen::MatrixXd::Constant(1, 1, -1.0);
  s.C = Eigen::MatrixXd::Constant(1, 1, c);
  s.D = Eigen::VectorXd::Constant(1, d);
  return s;
}

}  // namespace

TEST(LinearRe, ScalarQuadraticFormula) {
  const LinearSolution sol = solve_linear_re(scalar(0.5, 0.2), 0.0);
  const double oracle = (1.0 - std::sqrt(1.0 - 4.0 * 0.5 * 0.2)) / (2.0 * 0.5);
  EXPECT_NEAR(oracle, 0.2254033307585166, 1e-15);
  EXPECT_NEAR(sol.P(0, 0), oracle, 1e-12);
  EXPECT_TRUE(sol.determinate);
  EXPECT_EQ(sol.roots.stable, 1);
  EXPECT_LT(sol.residual, 1e-12);
}

TEST(LinearRe, ScalarShockLoading) {
  const double a = 0.5, c = 0.2, d = 1.0, rho = 0.6;
  const LinearSolution sol = solve_linear_re(scalar(a, c, d), rho);
  const double p = sol.P(0, 0);
  // x = p x_{-1} + q eps: -q + a (p q + q rho) + d = 0
  EXPECT_NEAR(sol.Q(0), d / (1.0 - a * p - a * rho), 1e-12);
}

TEST(LinearRe, TooManyStableRootsIsIndeterminate) {
  // a=2, c=0.1: both roots of 2P^2 - P + 0.1 lie inside the unit circle
  try {
    solve_linear_re(scalar(2.0, 0.1), 0.0);
    FAIL() << "expected IndeterminacyError";
  } catch (const IndeterminacyError& e) {
    EXPECT_EQ(e.required_stable(), 1);
    EXPECT_GT(e.stable_roots(), 1);
  }
}

TEST(LinearRe, NoStableSolutionIsReported) {
  // a=0.1, c=2: both roots explosive
  EXPECT_THROW(solve_linear_re(scalar(0.1, 2.0), 0.0), IndeterminacyError);
}

TEST(LinearRe, RootCountOfScalarPencil) {
  const RootCount r = count_roots(scalar(0.5, 0.2));
  EXPECT_EQ(r.stable, 1);
  EXPECT_EQ(r.unstable, 1);
}

TEST(LinearRe, ReproducesRepresentativeFirmClosedForm) {
  const RFParams p = RFParams::from(ModelParams::calibrated());
  const RFSolution cf = solve_rf(p);
  const LinearSolution sol = solve_linear_re(rf_linear_system(p), p.rho_m);
  EXPECT_NEAR(sol.Q(0), cf.a_y, 1e-9);
  EXPECT_NEAR(sol.Q(1), cf.a_pi, 1e-9);
  EXPECT_NEAR(sol.Q(2), cf.a_R, 1e-9);
  EXPECT_LT(sol.P.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LinearRe, HeterogeneousFirmSystemIsDeterminate) {
  const HfModel& hf = fixture::baseline_hf();
  EXPECT_TRUE(hf.solution.determinate);
  EXPECT_EQ(hf.solution.roots.stable, hf.system.size());
  EXPECT_LT(hf.solution.spectral_radius_P, 1.0);
  EXPECT_LT(hf.solution.spectral_radius_F, 1.0);
  const LinearSystem& s = hf.linear;
  const Eigen::MatrixXd& P = hf.solution.P;
  const Eigen::MatrixXd qme = s.A * P * P + s.B * P + s.C;
  EXPECT_LT(qme.cwiseAbs().maxCoeff(), 1e-7);
}

TEST(LinearRe, PermutedOrderingGivesIdenticalSolution) {
  const HfModel& hf = fixture::baseline_hf();
  const int n = hf.system.size();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(5);
  std::shuffle(order.begin(), order.end(), rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  for (int i = 0; i < n; ++i) perm.indices()(i) = order[static_cast<std::size_t>(i)];

  // relabel variables and reorder equations with the same permutation
  LinearSystem s;
  s.A = perm * hf.linear.A * perm.transpose();
  s.B = perm * hf.linear.B * perm.transpose();
  s.C = perm * hf.linear.C * perm.transpose();
  s.D = perm * hf.linear.D;
  const LinearSolution sol = solve_linear_re(s, hf.solution.shock_persistence);
  const Eigen::MatrixXd back = perm.transpose() * sol.P * perm;
  const Eigen::VectorXd q_back = perm.transpose() * sol.Q;
  EXPECT_LT((back - hf.solution.P).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((q_back - hf.solution.Q).cwiseAbs().maxCoeff(), 1e-9 * hf.solution.Q.cwiseAbs().maxCoeff());
}

TEST(LinearRe, ValidatesShapes) {
  LinearSystem s = scalar(0.5, 0.2);
  s.D = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(solve_linear_re(s, 0.0), std::invalid_argument);
}

TEST(LinearRe, SpectralRadius) {
  Eigen::Matrix2d m;
  m << 0.0, -0.5, 0.5, 0.0;
  EXPECT_NEAR(spectral_radius(m), 0.5, 1e-15);
}

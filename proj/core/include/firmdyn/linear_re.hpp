#pragma once

#include <Eigen/Dense>

namespace firmdyn {

/// A E_t x_{t+1} + B x_t + C x_{t-1} + D eps_t = 0, eps_t = rho eps_{t-1} + eta_t.
struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::VectorXd D;

  int size() const { return static_cast<int>(B.rows()); }
  void validate() const;
};

struct RootCount {
  int stable = 0;    // generalized eigenvalues strictly inside the unit circle
  int unstable = 0;  // outside or on the circle, including infinite ones
};

/// Counts generalized eigenvalues of the companion pencil
/// [[-B,-C],[I,0]] - lambda [[A,0],[0,I]] (real QZ).
RootCount count_roots(const LinearSystem& sys);

struct LinearReOptions {
  double tol = 1e-12;       // relative sup-norm change of P between iterations
  int max_iter = 100000;
  bool check_root_count = true;
};

/// x_t = P x_{t-1} + Q eps_t.
struct LinearSolution {
  Eigen::MatrixXd P;
  Eigen::VectorXd Q;
  double shock_persistence = 0.0;
  bool determinate = false;
  double spectral_radius_P = 0.0;
  /// Spectral radius of F = -(AP+B)^{-1} A; below one iff the forward
  /// complement is stable.
  double spectral_radius_F = 0.0;
  RootCount roots;
  int iterations = 0;
  /// max |A P^2 + B P + C|.
  double residual = 0.0;
};

/// Stable solution by linear time iteration from P = 0. Throws
/// IndeterminacyError (with root counts) when the solution is not unique and
/// stable, ConvergenceError when the iteration stalls.
LinearSolution solve_linear_re(const LinearSystem& sys, double rho, const LinearReOptions& options = {});

/// Spectral radius of a square matrix.
double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace firmdyn

#include "firmdyn/linear_re.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "firmdyn/errors.hpp"

namespace firmdyn {

void LinearSystem::validate() const {
  const auto n = B.rows();
  if (n == 0 || B.cols() != n || A.rows() != n || A.cols() != n || C.rows() != n || C.cols() != n ||
      D.size() != n) {
    throw std::invalid_argument("LinearSystem: matrices must be square and conformable");
  }
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite()) {
    throw NumericalError("LinearSystem: non-finite coefficients");
  }
}

RootCount count_roots(const LinearSystem& sys) {
  const int n = sys.size();
  Eigen::MatrixXd left = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::MatrixXd right = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  left.topLeftCorner(n, n) = -sys.B;
  left.topRightCorner(n, n) = -sys.C;
  left.bottomLeftCorner(n, n).setIdentity();
  right.topLeftCorner(n, n) = sys.A;
  right.bottomRightCorner(n, n).setIdentity();

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(left, right, false);
  if (ges.info() != Eigen::Success) {
    throw NumericalError("count_roots: QZ decomposition failed");
  }
  RootCount count;
  const Eigen::VectorXcd alphas = ges.alphas();
  const Eigen::VectorXd betas = ges.betas();
  for (int i = 0; i < 2 * n; ++i) {
    if (std::abs(alphas[i]) < std::abs(betas[i])) {
      ++count.stable;
    } else {
      ++count.unstable;
    }
  }
  return count;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_radius: eigenvalue computation failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

LinearSolution solve_linear_re(const LinearSystem& sys, double rho, const LinearReOptions& options) {
  sys.validate();
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("solve_linear_re: shock persistence must satisfy |rho| < 1");
  }
  const int n = sys.size();
  LinearSolution sol;
  sol.shock_persistence = rho;

  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << "no unique stable solution: " << why << " (stable roots " << sol.roots.stable << ", required " << n
        << "; spectral radius P " << sol.spectral_radius_P << ", F " << sol.spectral_radius_F << ")";
    throw IndeterminacyError(msg.str(), sol.roots.stable, n);
  };

  if (options.check_root_count) {
    sol.roots = count_roots(sys);
    if (sol.roots.stable != n) {
      fail(sol.roots.stable > n ? "too many stable roots" : "too few stable roots");
    }
  }

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  bool converged = false;
  for (int it = 1; it <= options.max_iter; ++it) {
    lu.compute(sys.A * P + sys.B);
    Eigen::MatrixXd next = -lu.solve(sys.C);
    if (!next.allFinite()) {
      fail("time iteration produced non-finite values");
    }
    const double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
    const double change = (next - P).cwiseAbs().maxCoeff() / scale;
    P = std::move(next);
    sol.iterations = it;
    if (change < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("solve_linear_re: time iteration did not converge in " +
                           std::to_string(options.max_iter) + " iterations");
  }

  const Eigen::MatrixXd AP_B = sys.A * P + sys.B;
  lu.compute(AP_B);
  const Eigen::MatrixXd F = -lu.solve(sys.A);
  sol.spectral_radius_P = spectral_radius(P);
  sol.spectral_radius_F = spectral_radius(F);
  if (!(sol.spectral_radius_P < 1.0)) {
    fail("explosive transition matrix");
  }
  if (!(sol.spectral_radius_F < 1.0)) {
    fail("forward complement is not stable");
  }

  lu.compute(AP_B + rho * sys.A);
  sol.Q = lu.solve(-sys.D);
  sol.P = std::move(P);
  sol.residual = (sys.A * sol.P * sol.P + sys.B * sol.P + sys.C).cwiseAbs().maxCoeff();
  sol.determinate = true;
  return sol;
}

}  // namespace firmdyn

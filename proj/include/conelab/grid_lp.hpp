#pragma once

// Dense primal-dual interior point method (Mehrotra predictor-corrector) for
//   minimize c^T x  subject to  A x = b,  x >= 0
// with few rows and many columns, solved through the normal equations.

#include <string>

#include <Eigen/Dense>

namespace conelab {

struct LpOptions {
  double tol = 1e-9;
  int max_iterations = 200;
};

struct LpResult {
  bool optimal = false;
  std::string status;  // "optimal", "iteration-cap", "diverged"
  Eigen::VectorXd x;
  Eigen::VectorXd y;   // equality multipliers: A^T y + s = c
  Eigen::VectorXd s;
  double objective = 0.0;
  double primal_residual = 0.0;  // |A x - b| / (1 + |b|)
  int iterations = 0;
};

LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                           const LpOptions& options = {});

}  // namespace conelab

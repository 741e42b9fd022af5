#pragma once

// Gram-matrix parametrization of sums of squares and the two solvers built on
// it. With b an integral-orthonormal basis of P_{n,k} (s = D_{n,k} elements),
// a symmetric s x s matrix Q represents sum_ij Q_ij b_i b_j; its image is taken
// in integral-orthonormal coordinates of P_{n,2k}. Symmetric matrices travel as
// svec vectors (off-diagonals scaled by sqrt 2) so that Frobenius geometry is
// Euclidean.
//
// Two facts used throughout: A(I) = s r^{2k}, and range(A^*) is exactly the
// set of integral catalecticants H_g, so a PSD matrix in range(A^*) is a
// form g with <g, p^2> >= 0 for every p.

#include <memory>

#include <Eigen/Dense>

#include "conelab/metrics.hpp"
#include "conelab/poly.hpp"

namespace conelab {

struct GramMap {
  int n = 0;
  int k = 0;
  int s = 0;  // D_{n,k}
  int m = 0;  // s(s+1)/2
  int N = 0;  // dim P_{n,2k}
  std::shared_ptr<const GramData> small;  // integral ONB of P_{n,k}
  std::shared_ptr<const GramData> big;    // integral ONB of P_{n,2k}
  Eigen::MatrixXd A;                      // N x m
  Eigen::MatrixXd A_pinv;                 // m x N, A^T (A A^T)^{-1}
  Eigen::MatrixXd null_basis;             // m x (m - N), orthonormal
  Eigen::VectorXd identity_svec;

  Eigen::VectorXd svec(const Eigen::MatrixXd& Q) const;
  Eigen::MatrixXd smat(const Eigen::VectorXd& v) const;

  Eigen::VectorXd coordinates(const FormD& f) const { return big->coordinates(f); }
  FormD form(const Eigen::VectorXd& z) const { return big->form_from_coordinates(z); }
  FormD form_of_gram(const Eigen::MatrixXd& Q) const { return form(A * svec(Q)); }
  // Form g with H_g = Y, for Y in range(A^*).
  FormD form_of_dual(const Eigen::MatrixXd& Y) const;
};

// Cached per (n, k).
const GramMap& gram_map(int n, int k);

struct MinEigenOptions {
  double rel_gap = 1e-7;   // stop when upper - lower <= rel_gap * max(1, |lower|)
  double mu_factor = 0.2;
  int max_newton = 400;    // total Newton steps
};

struct MinEigenResult {
  // lambda* = max { lambda_min(Q) : A(Q) = f } lies in [lower, upper].
  double lower = 0.0;
  double upper = 0.0;
  Eigen::MatrixXd Q;  // A(Q) = f, lambda_min(Q) >= lower
  Eigen::MatrixXd Y;  // PSD, trace one, in range(A^*); <Y, Q> = upper
  int newton_steps = 0;
  bool converged = false;
};

// Log-barrier path following on (y, lambda) with Q = Q0 + sum y_j N_j and
// slack S = Q - lambda I. Every iterate gives a certified lower bound; the
// rescaled inverse slack, projected onto range(A^*) and shifted to be PSD,
// gives a certified upper bound.
MinEigenResult maximize_min_eigenvalue(const GramMap& map, const Eigen::VectorXd& z, const MinEigenOptions& options = {});

struct DykstraResult {
  bool converged = false;
  int iterations = 0;
  Eigen::MatrixXd Q;  // PSD (clipped), A(Q) close to the target
  double residual = 0.0;  // |A(Q) - z| / max(1, |z|)
};

// Alternating projections with Dykstra's correction between the PSD cone and
// the affine set {Q : A(Q) = z}.
DykstraResult dykstra_psd_affine(const GramMap& map, const Eigen::VectorXd& z, double tol, int max_iterations);

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& X);

}  // namespace conelab

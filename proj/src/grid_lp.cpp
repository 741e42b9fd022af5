#include "conelab/grid_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conelab {

namespace {

double step_to_boundary(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

Eigen::LLT<Eigen::MatrixXd> factor(Eigen::MatrixXd M) {
  const double shift = 1e-14 * std::max(1.0, M.diagonal().maxCoeff());
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() == Eigen::Success) return llt;
    M.diagonal().array() += shift * std::pow(100.0, attempt);
  }
  return Eigen::LLT<Eigen::MatrixXd>(M);
}

}  // namespace

LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                           const LpOptions& options) {
  const Eigen::Index cols = A.cols();
  LpResult out;

  // Mehrotra's starting point.
  const Eigen::LLT<Eigen::MatrixXd> aat = factor(A * A.transpose());
  Eigen::VectorXd x = A.transpose() * aat.solve(b);
  Eigen::VectorXd y = aat.solve(A * c);
  Eigen::VectorXd s = c - A.transpose() * y;
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  s.array() += std::max(-1.5 * s.minCoeff(), 0.0);
  if (x.maxCoeff() <= 0.0) x.setOnes();
  if (s.maxCoeff() <= 0.0) s.setOnes();
  const double xs = x.dot(s);
  x.array() += 0.5 * xs / s.sum();
  s.array() += 0.5 * xs / x.sum();

  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + c.norm();
  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    const Eigen::VectorXd rb = A * x - b;
    const Eigen::VectorXd rc = A.transpose() * y + s - c;
    const double mu = x.dot(s) / static_cast<double>(cols);
    const double pobj = c.dot(x);
    const double dobj = b.dot(y);
    out.primal_residual = rb.norm() / bnorm;
    if (out.primal_residual < options.tol && rc.norm() / cnorm < options.tol &&
        std::abs(pobj - dobj) / (1.0 + std::abs(pobj)) < options.tol) {
      out.optimal = true;
      out.status = "optimal";
      break;
    }
    if (!x.allFinite() || x.norm() > 1e14 * (1.0 + b.norm())) {
      out.status = "diverged";
      break;
    }

    const Eigen::VectorXd d = x.cwiseQuotient(s);
    const Eigen::LLT<Eigen::MatrixXd> M = factor(A * d.asDiagonal() * A.transpose());
    auto solve = [&](const Eigen::VectorXd& rxs, Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& ds) {
      const Eigen::VectorXd t = rxs.cwiseQuotient(s) + d.cwiseProduct(rc);
      dy = M.solve(-rb - A * t);
      ds = -rc - A.transpose() * dy;
      dx = rxs.cwiseQuotient(s) - d.cwiseProduct(ds);
    };

    Eigen::VectorXd dx, dy, ds;
    solve(-x.cwiseProduct(s), dx, dy, ds);
    const double ap_aff = step_to_boundary(x, dx);
    const double ad_aff = step_to_boundary(s, ds);
    const double mu_aff = (x + ap_aff * dx).dot(s + ad_aff * ds) / static_cast<double>(cols);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    Eigen::VectorXd rxs = -x.cwiseProduct(s) - dx.cwiseProduct(ds);
    rxs.array() += sigma * mu;
    solve(rxs, dx, dy, ds);
    const double ap = std::min(1.0, 0.99 * step_to_boundary(x, dx));
    const double ad = std::min(1.0, 0.99 * step_to_boundary(s, ds));
    x += ap * dx;
    y += ad * dy;
    s += ad * ds;
  }
  if (!out.optimal && out.status.empty()) out.status = "iteration-cap";
  out.x = x;
  out.y = y;
  out.s = s;
  out.objective = c.dot(x);
  out.primal_residual = (A * x - b).norm() / bnorm;
  return out;
}

}  // namespace conelab

#include "conelab/sdp.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace conelab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::unique_ptr<GramMap> build_gram_map(int n, int k) {
  auto map = std::make_unique<GramMap>();
  map->n = n;
  map->k = k;
  map->small = orthonormal_basis({n, k, SpaceKind::Full}, MetricKind::Integral);
  map->big = orthonormal_basis({n, 2 * k, SpaceKind::Full}, MetricKind::Integral);
  map->s = map->small->dimension;
  map->m = map->s * (map->s + 1) / 2;
  map->N = map->big->dimension;

  const auto small = MonomialBasis::get(n, k);
  const auto& table = product_table(n, k, k);
  const int ms = small->size();
  const Eigen::MatrixXd& B = map->small->basis;

  // Monomial coefficients of b_i b_j, one column per svec slot.
  Eigen::MatrixXd products = Eigen::MatrixXd::Zero(map->N, map->m);
  int col = 0;
  for (int j = 0; j < map->s; ++j)
    for (int i = j; i < map->s; ++i, ++col) {
      const double w = (i == j) ? 1.0 : kSqrt2;
      for (int a = 0; a < ms; ++a) {
        if (B(a, i) == 0.0) continue;
        for (int b = 0; b < ms; ++b)
          products(table[static_cast<std::size_t>(a * ms + b)], col) += w * B(a, i) * B(b, j);
      }
    }
  map->A = map->big->basis.transpose() * map->big->gram * products;

  const Eigen::MatrixXd AAt = map->A * map->A.transpose();
  map->A_pinv = map->A.transpose() * AAt.ldlt().solve(Eigen::MatrixXd::Identity(map->N, map->N));

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(map->A.transpose());
  const Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(map->m, map->m);
  map->null_basis = Qfull.rightCols(map->m - map->N);

  map->identity_svec = map->svec(Eigen::MatrixXd::Identity(map->s, map->s));
  return map;
}

bool cholesky(const Eigen::MatrixXd& S, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(S);
  if (llt.info() != Eigen::Success) return false;
  const auto diag = llt.matrixLLT().diagonal();
  return (diag.array() > 0.0).all() && diag.allFinite();
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double min_eigenvalue(const Eigen::MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

Eigen::VectorXd GramMap::svec(const Eigen::MatrixXd& Q) const {
  Eigen::VectorXd v(m);
  int col = 0;
  for (int j = 0; j < s; ++j)
    for (int i = j; i < s; ++i, ++col) v[col] = (i == j) ? Q(i, i) : kSqrt2 * 0.5 * (Q(i, j) + Q(j, i));
  return v;
}

Eigen::MatrixXd GramMap::smat(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd Q(s, s);
  int col = 0;
  for (int j = 0; j < s; ++j)
    for (int i = j; i < s; ++i, ++col) {
      const double x = (i == j) ? v[col] : v[col] / kSqrt2;
      Q(i, j) = x;
      Q(j, i) = x;
    }
  return Q;
}

FormD GramMap::form_of_dual(const Eigen::MatrixXd& Y) const {
  // svec(Y) = A^T z  =>  z = (A A^T)^{-1} A svec(Y) = A_pinv^T svec(Y)
  return form(A_pinv.transpose() * svec(Y));
}

const GramMap& gram_map(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("gram_map: need n >= 1, k >= 1");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const GramMap>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, k}); it != cache.end()) return *it->second;
  }
  auto built = build_gram_map(n, k);
  std::lock_guard lock(mutex);
  return *cache.emplace(std::make_pair(n, k), std::move(built)).first->second;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (X + X.transpose()));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

MinEigenResult maximize_min_eigenvalue(const GramMap& map, const Eigen::VectorXd& z, const MinEigenOptions& options) {
  const int s = map.s;
  const int r = map.m - map.N;
  const int p = r + 1;
  const double scale = z.norm();
  MinEigenResult out;
  if (scale == 0.0) {
    out.Q = Eigen::MatrixXd::Zero(s, s);
    out.Y = Eigen::MatrixXd::Identity(s, s) / s;
    out.converged = true;
    return out;
  }

  const Eigen::MatrixXd Q0 = map.smat(map.A_pinv * (z / scale));
  std::vector<Eigen::MatrixXd> Nj(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) Nj[static_cast<std::size_t>(j)] = map.smat(map.null_basis.col(j));

  auto gram_at = [&](const Eigen::VectorXd& y) {
    Eigen::MatrixXd Q = Q0;
    for (int j = 0; j < r; ++j) Q += y[j] * Nj[static_cast<std::size_t>(j)];
    return Q;
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(r);
  double lambda = min_eigenvalue(Q0) - 1.0;
  double mu = 1.0 / s;
  double best_upper = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_Y = Eigen::MatrixXd::Identity(s, s) / s;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::MatrixXd stacked(s, s * p);
  for (int j = 0; j < r; ++j) stacked.middleCols(j * s, s) = Nj[static_cast<std::size_t>(j)];
  stacked.middleCols(r * s, s) = -Eigen::MatrixXd::Identity(s, s);

  int steps = 0;
  while (steps < options.max_newton) {
    // Centering for the current mu.
    for (int inner = 0; inner < 60 && steps < options.max_newton; ++inner, ++steps) {
      Eigen::MatrixXd S = gram_at(y);
      S.diagonal().array() -= lambda;
      if (!cholesky(S, llt)) throw std::logic_error("maximize_min_eigenvalue: lost strict feasibility");
      // U_a = L^{-1} A_a L^{-T} (symmetric), stacked as columns vec(U_a) so
      // that tr(S^{-1} A_a S^{-1} A_b) = vec(U_a) . vec(U_b).
      const auto L = llt.matrixL();
      Eigen::MatrixXd half = L.solve(stacked);
      for (int a = 0; a < p; ++a) half.middleCols(a * s, s).transposeInPlace();
      const Eigen::MatrixXd full = L.solve(half);
      const Eigen::Map<const Eigen::MatrixXd> W(full.data(), s * s, p);
      Eigen::VectorXd grad(p);
      for (int a = 0; a < p; ++a) grad[a] = -mu * full.middleCols(a * s, s).trace();
      Eigen::MatrixXd H(p, p);
      H.noalias() = mu * W.transpose() * W;
      grad[r] -= 1.0;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      Eigen::VectorXd dx = -ldlt.solve(grad);
      if (!dx.allFinite()) {
        H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
        dx = -Eigen::LDLT<Eigen::MatrixXd>(H).solve(grad);
      }
      const double decrement2 = -grad.dot(dx);
      if (decrement2 / mu < 1e-10) break;

      const double phi0 = -lambda - mu * log_det(llt);
      double t = 1.0;
      Eigen::LLT<Eigen::MatrixXd> trial;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
        const Eigen::VectorXd y1 = y + t * dx.head(r);
        const double l1 = lambda + t * dx[r];
        Eigen::MatrixXd S1 = gram_at(y1);
        S1.diagonal().array() -= l1;
        if (!cholesky(S1, trial)) continue;
        const double phi1 = -l1 - mu * log_det(trial);
        if (phi1 <= phi0 - 0.25 * t * decrement2) {
          y = y1;
          lambda = l1;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }

    // Dual certificate from the rescaled inverse slack.
    Eigen::MatrixXd S = gram_at(y);
    S.diagonal().array() -= lambda;
    if (!cholesky(S, llt)) throw std::logic_error("maximize_min_eigenvalue: lost strict feasibility");
    const Eigen::MatrixXd Sinv = llt.solve(Eigen::MatrixXd::Identity(s, s));
    Eigen::VectorXd yv = map.svec(mu * Sinv);
    yv -= map.null_basis * (map.null_basis.transpose() * yv);
    Eigen::MatrixXd Y = map.smat(yv);
    const double ev = min_eigenvalue(Y);
    if (ev < 0.0) Y.diagonal().array() -= ev;
    Y /= Y.trace();
    const double upper = (Y.cwiseProduct(Q0)).sum();
    if (upper < best_upper) {
      best_upper = upper;
      best_Y = Y;
    }
    const double gap = best_upper - lambda;
    if (gap <= options.rel_gap * std::max(std::abs(lambda), 1.0 / s)) {
      out.converged = true;
      break;
    }
    mu *= options.mu_factor;
  }

  out.lower = lambda * scale;
  out.upper = std::max(best_upper, lambda) * scale;
  out.Q = gram_at(y) * scale;
  out.Y = best_Y;
  out.newton_steps = steps;
  return out;
}

DykstraResult dykstra_psd_affine(const GramMap& map, const Eigen::VectorXd& z, double tol, int max_iterations) {
  DykstraResult out;
  const double znorm = std::max(1.0, z.norm());
  auto project_affine = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - map.A_pinv * (map.A * v - z);
  };
  Eigen::VectorXd x = map.A_pinv * z;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(map.m);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(map.m);
  Eigen::VectorXd psd(map.m);
  for (int it = 1; it <= max_iterations; ++it) {
    psd = map.svec(project_psd(map.smat(x + p)));
    p = x + p - psd;
    const Eigen::VectorXd x_new = project_affine(psd + q);
    q = psd + q - x_new;
    x = x_new;
    out.iterations = it;
    out.residual = (map.A * psd - z).norm() / znorm;
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
  }
  out.Q = map.smat(psd);
  return out;
}

}  // namespace conelab

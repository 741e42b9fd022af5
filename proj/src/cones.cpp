#include "conelab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "conelab/apolarity.hpp"
#include "conelab/errors.hpp"
#include "conelab/grid_lp.hpp"
#include "conelab/metrics.hpp"
#include "conelab/sdp.hpp"

namespace conelab {

std::string to_string(GaugeMethod method) {
  switch (method) {
    case GaugeMethod::SphereMin: return "sphere-min";
    case GaugeMethod::SdpBarrier: return "sdp-barrier";
    case GaugeMethod::SdpBisection: return "sdp-bisection";
    case GaugeMethod::GridLp: return "grid-lp";
    case GaugeMethod::DualCertificate: return "dual-certificate";
    case GaugeMethod::Eigen: return "eigen";
  }
  return "unknown";
}

std::string to_string(SosStatus status) {
  switch (status) {
    case SosStatus::Feasible: return "feasible";
    case SosStatus::Infeasible: return "infeasible";
    case SosStatus::Undecided: return "undecided";
  }
  return "unknown";
}

namespace {

int half_degree(const FormD& f, const char* who) {
  if (f.degree() % 2 != 0 || f.degree() == 0)
    throw std::invalid_argument(std::string(who) + ": degree must be even and positive");
  return f.degree() / 2;
}

double min_eigenvalue(const Eigen::MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double max_eigenvalue(const Eigen::MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[X.rows() - 1];
}

// c max(0, -<f, g>_d) / ((2k)! integral g)
double pairing_bound(const FormD& f, const FormD& g) {
  const int two_k = f.degree();
  const double c = to_double(t_matrix(f.n(), two_k).c);
  const double mass = sphere_integral(g);
  if (!(mass > 0.0)) return 0.0;
  return c * std::max(0.0, -apolar_ip(f, g)) / (to_double(factorial(two_k)) * mass);
}

struct LpGauge {
  GaugeResult result;
  LpResult lp;
};

LpGauge linpowers_lp(const FormD& f, const std::vector<Eigen::VectorXd>& grid, double tol) {
  const int n = f.n();
  const int two_k = f.degree();
  const auto big = orthonormal_basis({n, two_k, SpaceKind::Full}, MetricKind::Integral);
  const auto basis = MonomialBasis::get(n, two_k);
  const int nm = basis->size();
  const int m = static_cast<int>(grid.size());

  std::vector<double> multinomials(static_cast<std::size_t>(nm));
  for (int a = 0; a < nm; ++a) multinomials[static_cast<std::size_t>(a)] = to_double(multinomial((*basis)[a]));
  Eigen::MatrixXd mono(nm, m);
  std::vector<double> pw(static_cast<std::size_t>(n * (two_k + 1)));
  for (int j = 0; j < m; ++j) {
    const Eigen::VectorXd& v = grid[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
      pw[static_cast<std::size_t>(i * (two_k + 1))] = 1.0;
      for (int e = 1; e <= two_k; ++e)
        pw[static_cast<std::size_t>(i * (two_k + 1) + e)] = pw[static_cast<std::size_t>(i * (two_k + 1) + e - 1)] * v[i];
    }
    for (int a = 0; a < nm; ++a) {
      double t = multinomials[static_cast<std::size_t>(a)];
      for (int i = 0; i < n; ++i) t *= pw[static_cast<std::size_t>(i * (two_k + 1) + (*basis)[a][i])];
      mono(a, j) = t;
    }
  }
  const Eigen::MatrixXd to_coords = big->basis.transpose() * big->gram;
  Eigen::MatrixXd phi = to_coords * mono;
  // Every v^{2k} has the same integral norm; unit columns condition the LP.
  const double col_norm = phi.col(0).norm();
  phi /= col_norm;

  const Eigen::VectorXd rho = big->coordinates(r_power<double>(n, two_k / 2));
  Eigen::MatrixXd A(phi.rows(), m + 1);
  A.leftCols(m) = phi;
  A.col(m) = -rho;
  const Eigen::VectorXd b = big->coordinates(f);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m + 1);
  c[m] = 1.0;

  LpGauge out;
  LpOptions lp_options;
  lp_options.tol = std::min(1e-9, tol);
  out.lp = solve_standard_lp(A, b, c, lp_options);
  GaugeResult& r = out.result;
  r.method = GaugeMethod::GridLp;
  const double t = out.lp.x.size() ? out.lp.x[m] : 0.0;
  const double residual = out.lp.x.size() ? (A * out.lp.x - b).norm() : std::numeric_limits<double>::infinity();
  if (out.lp.optimal && residual <= tol * (1.0 + t) * std::max(1.0, b.norm())) {
    r.upper = std::max(0.0, t);
    r.weights.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) r.weights[static_cast<std::size_t>(j)] = std::max(0.0, out.lp.x[j]) / col_norm;
  } else {
    r.upper = std::numeric_limits<double>::infinity();
    r.note = "grid LP " + out.lp.status + ", residual " + std::to_string(residual);
  }
  r.value = r.upper;
  return out;
}

}  // namespace

SphereMinimum min_on_sphere(const FormD& f, const SphereSearchOptions& options) {
  if (f.n() > 8) throw UnsupportedError("min_on_sphere: n <= 8 supported");
  const auto ext = minimize_on_sphere_search(f, options);
  return {ext.value, ext.point};
}

void require_mean_zero(const FormD& f, const char* who) {
  if (f.degree() % 2 != 0) throw std::invalid_argument(std::string(who) + ": degree must be even");
  const double mean = sphere_integral(f);
  const double scale = std::max(1.0, integral_norm(f));
  if (std::abs(mean) > 1e-10 * scale)
    throw std::invalid_argument(std::string(who) + ": form must have zero sphere integral (got " + std::to_string(mean) + ")");
}

GaugeResult gauge_nonneg(const FormD& f, const SphereSearchOptions& options) {
  require_mean_zero(f, "gauge_nonneg");
  GaugeResult r;
  r.method = GaugeMethod::SphereMin;
  if (f.is_zero()) return r;
  const SphereMinimum m = min_on_sphere(f, options);
  r.value = std::max(0.0, -m.value);
  r.lower = r.upper = r.value;
  r.point = m.point;
  return r;
}

SosFeasibility sos_feasible(const FormD& f, double tol, int max_iterations) {
  const int k = half_degree(f, "sos_feasible");
  SosFeasibility out;
  if (f.is_zero()) {
    out.status = SosStatus::Feasible;
    out.stage = "trivial";
    const int s = static_cast<int>(dim_forms(f.n(), k));
    out.certificate.gram = Eigen::MatrixXd::Zero(s, s);
    return out;
  }
  const GramMap& map = gram_map(f.n(), k);
  const Eigen::VectorXd z = map.coordinates(f);
  const double scale = z.norm();
  const Eigen::VectorXd zn = z / scale;

  const DykstraResult dk = dykstra_psd_affine(map, zn, tol, max_iterations);
  out.iterations = dk.iterations;
  if (dk.converged) {
    out.status = SosStatus::Feasible;
    out.stage = "dykstra";
    out.certificate.gram = dk.Q * scale;
    out.certificate.residual = dk.residual;
    out.certificate.min_eigenvalue = min_eigenvalue(dk.Q) * scale;
    return out;
  }

  MinEigenOptions options;
  options.rel_gap = tol;
  const MinEigenResult res = maximize_min_eigenvalue(map, zn, options);
  out.stage = "barrier";
  out.iterations += res.newton_steps;
  out.lambda_lower = res.lower;
  out.lambda_upper = res.upper;
  if (res.lower >= -tol) {
    Eigen::MatrixXd Q = res.Q;
    if (res.lower < 0.0) Q.diagonal().array() -= res.lower;  // within tol; keep the certificate PSD
    out.status = SosStatus::Feasible;
    out.certificate.gram = Q * scale;
    out.certificate.residual = (map.A * map.svec(Q) - zn).norm();
    out.certificate.min_eigenvalue = min_eigenvalue(Q) * scale;
  } else if (res.upper < 0.0) {
    out.status = SosStatus::Infeasible;
    const FormD g = map.form_of_dual(res.Y);
    out.witness = g;
    out.witness_pairing = integral_ip(g, f) / scale;
  } else {
    out.status = SosStatus::Undecided;
  }
  return out;
}

GaugeResult gauge_sos(const FormD& f, double tol) {
  require_mean_zero(f, "gauge_sos");
  const int k = half_degree(f, "gauge_sos");
  GaugeResult r;
  r.method = GaugeMethod::SdpBarrier;
  if (f.is_zero()) return r;
  const GramMap& map = gram_map(f.n(), k);
  MinEigenOptions options;
  options.rel_gap = tol;
  const MinEigenResult res = maximize_min_eigenvalue(map, map.coordinates(f), options);
  const double s = map.s;
  r.lower = std::max(0.0, -s * res.upper);
  r.upper = std::max(r.lower, -s * res.lower);
  r.value = 0.5 * (r.lower + r.upper);
  r.gram = res.Q;
  r.gram.diagonal().array() -= res.lower;
  r.witness = map.form_of_dual(res.Y);
  if (!res.converged) {
    r.undecided = 1;
    r.note = "barrier stopped before the requested gap";
  }
  return r;
}

GaugeResult gauge_sos_bisection(const FormD& f, double tol) {
  require_mean_zero(f, "gauge_sos_bisection");
  const int k = half_degree(f, "gauge_sos_bisection");
  GaugeResult r;
  r.method = GaugeMethod::SdpBisection;
  if (f.is_zero()) return r;
  const FormD rk = r_power<double>(f.n(), k);
  auto status_at = [&](double t) { return sos_feasible(f / t + rk, 1e-9, 2000).status; };

  double lo = 0.0;
  double hi = integral_norm(f);
  for (int guard = 0; guard < 60; ++guard) {
    const SosStatus st = status_at(hi);
    if (st == SosStatus::Feasible) break;
    if (st == SosStatus::Undecided) ++r.undecided;
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    const SosStatus st = status_at(mid);
    if (st == SosStatus::Feasible) {
      hi = mid;
    } else if (st == SosStatus::Infeasible) {
      lo = mid;
    } else {
      ++r.undecided;
      break;
    }
  }
  r.lower = lo;
  r.upper = hi;
  r.value = 0.5 * (lo + hi);
  return r;
}

double sq_norm(const FormD& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(catalecticant(f, MetricKind::Integral).matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double support_sos(const FormD& f) { return max_eigenvalue(catalecticant(f, MetricKind::Integral).matrix); }

bool dual_sos_membership(const FormD& f) {
  return min_eigenvalue(catalecticant(f, MetricKind::Apolar).matrix) >= -1e-10;
}

GaugeResult gauge_linpowers_upper(const FormD& f, const std::vector<Eigen::VectorXd>& grid, double tol) {
  require_mean_zero(f, "gauge_linpowers_upper");
  half_degree(f, "gauge_linpowers_upper");
  if (f.is_zero()) {
    GaugeResult r;
    r.method = GaugeMethod::GridLp;
    return r;
  }
  GaugeResult r = linpowers_lp(f, grid, tol).result;
  r.lower = 0.0;
  return r;
}

GaugeResult gauge_linpowers_lower(const FormD& f, const std::vector<FormD>& witnesses, const SphereSearchOptions& options) {
  require_mean_zero(f, "gauge_linpowers_lower");
  GaugeResult r;
  r.method = GaugeMethod::DualCertificate;
  for (const FormD& g : witnesses) {
    if (g.n() != f.n() || g.degree() != f.degree()) throw std::invalid_argument("gauge_linpowers_lower: witness outside P_{n,2k}");
    if (min_on_sphere(g, options).value < -1e-10) throw std::invalid_argument("gauge_linpowers_lower: witness is not certified nonnegative");
    if (!(sphere_integral(g) > 0.0)) throw std::invalid_argument("gauge_linpowers_lower: witness must have positive integral");
    const double bound = pairing_bound(f, g);
    if (bound > r.lower) {
      r.lower = bound;
      r.witness = g;
    }
  }
  r.value = r.lower;
  r.upper = std::numeric_limits<double>::infinity();
  return r;
}

double linpowers_square_bound(const FormD& f) {
  const int k = half_degree(f, "linpowers_square_bound");
  const int n = f.n();
  const auto big = MonomialBasis::get(n, 2 * k);
  const auto small = MonomialBasis::get(n, k);
  const auto& table = product_table(n, k, k);
  const int s = small->size();
  Eigen::MatrixXd mono(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      const int g = table[static_cast<std::size_t>(a * s + b)];
      mono(a, b) = f[g] * to_double(exponent_factorial((*big)[g]));
    }
  const Eigen::MatrixXd& B = orthonormal_basis({n, k, SpaceKind::Full}, MetricKind::Integral)->basis;
  const Eigen::MatrixXd K = B.transpose() * mono * B;
  const double c = to_double(t_matrix(n, 2 * k).c);
  return c / to_double(factorial(2 * k)) * std::max(0.0, max_eigenvalue(-0.5 * (K + K.transpose())));
}

GaugeResult gauge_linpowers(const FormD& f, const LinPowersOptions& options) {
  require_mean_zero(f, "gauge_linpowers");
  const int k = half_degree(f, "gauge_linpowers");
  GaugeResult best;
  best.method = GaugeMethod::GridLp;
  if (f.is_zero()) return best;

  // Lower end: point powers (|min f|) and the best square do not depend on the grid.
  const SphereMinimum fmin = min_on_sphere(f, options.sphere);
  const double point_bound = std::max(0.0, -fmin.value);
  const double square_bound = linpowers_square_bound(f);

  int points = options.grid_points;
  double previous_width = std::numeric_limits<double>::infinity();
  for (;;) {
    const auto& grid = sphere_grid(f.n(), points, options.seed);
    LpGauge lp = linpowers_lp(f, grid, options.tol);
    GaugeResult r = lp.result;

    r.lower = std::max(point_bound, square_bound);
    r.point = fmin.point;
    if (lp.lp.y.size() > 0 && std::isfinite(r.upper)) {
      // Dual LP solution: h with <h, v_i^{2k}> <= 0 on the grid, so
      // g = -T h is nonnegative on the grid; lift it to be nonnegative everywhere.
      const auto big = orthonormal_basis({f.n(), 2 * k, SpaceKind::Full}, MetricKind::Integral);
      const FormD h = big->form_from_coordinates(lp.lp.y);
      FormD g = -t_matrix(f.n(), 2 * k).apply(h);
      const double gmin = min_on_sphere(g, options.sphere).value;
      if (gmin < 0.0) g += (-gmin * (1.0 + 1e-9) + 1e-14 * integral_norm(g)) * r_power<double>(f.n(), k);
      const double dual_bound = pairing_bound(f, g);
      if (dual_bound > r.lower) {
        r.lower = dual_bound;
        r.witness = g;
      }
    }
    r.value = std::isfinite(r.upper) ? 0.5 * (r.lower + r.upper) : r.lower;
    best = std::move(r);

    const double width = best.upper - best.lower;
    if (!options.refine || points * 2 > options.max_points) break;
    if (std::isfinite(width) && std::abs(previous_width - width) <= 1e-3 * best.upper) break;
    previous_width = width;
    points *= 2;
  }
  return best;
}

}  // namespace conelab

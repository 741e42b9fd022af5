#include "conelab/apolarity.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "conelab/harmonic.hpp"

namespace conelab {

FormQ OperatorMatrix::apply(const FormQ& f) const {
  if (f.n() != n || f.degree() != two_k) throw std::invalid_argument("T: form outside P_{n,2k}");
  const VectorQ v = matrix * Eigen::Map<const VectorQ>(f.coeffs().data(), f.size());
  return FormQ(n, two_k, std::vector<Rational>(v.data(), v.data() + v.size()));
}

FormD OperatorMatrix::apply(const FormD& f) const {
  if (f.n() != n || f.degree() != two_k) throw std::invalid_argument("T: form outside P_{n,2k}");
  const Eigen::VectorXd v = numeric * Eigen::Map<const Eigen::VectorXd>(f.coeffs().data(), f.size());
  return FormD(n, two_k, std::vector<double>(v.data(), v.data() + v.size()));
}

const OperatorMatrix& t_matrix(int n, int two_k) {
  if (n < 2 || two_k < 2 || two_k % 2 != 0) throw std::invalid_argument("t_matrix: need n >= 2 and even degree >= 2");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const OperatorMatrix>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, two_k}); it != cache.end()) return *it->second;
  }
  auto op = std::make_unique<OperatorMatrix>();
  op->n = n;
  op->two_k = two_k;
  const auto basis = MonomialBasis::get(n, two_k);
  const int N = basis->size();
  op->matrix = MatrixQ::Zero(N, N);
  for (int b = 0; b < N; ++b) {
    const Rational mult = multinomial((*basis)[b]);
    for (int a = 0; a < N; ++a) op->matrix(b, a) = mult * sphere_moment((*basis)[a] + (*basis)[b]);
  }
  op->numeric = op->matrix.unaryExpr([](const Rational& q) { return to_double(q); });
  std::vector<int> top(static_cast<std::size_t>(n), 0);
  top[0] = two_k;
  op->c = sphere_moment(ExponentVector(top));
  std::lock_guard lock(mutex);
  return *cache.emplace(std::make_pair(n, two_k), std::move(op)).first->second;
}

Rational rising_factorial(const Rational& x, int m) {
  Rational out(1);
  for (int j = 0; j < m; ++j) out *= x + j;
  return out;
}

Rational c_gamma_exact(int n, int k) {
  // Gamma(k+1/2)/Gamma(1/2) over Gamma(n/2+k)/Gamma(n/2)
  return rising_factorial(Rational(1, 2), k) / rising_factorial(Rational(n, 2), k);
}

double c_gamma_numeric(int n, int k) {
  return std::tgamma((2.0 * k + 1.0) / 2.0) * std::tgamma(n / 2.0) /
         (std::sqrt(M_PI) * std::tgamma((n + 2.0 * k) / 2.0));
}

Rational top_contraction_exact(int n, int k) {
  return factorial(k) / rising_factorial(Rational(2 * k + n, 2), k);
}

double top_contraction_numeric(int n, int k) {
  return std::exp(std::lgamma(k + 1.0) + std::lgamma(k + n / 2.0) - std::lgamma(2.0 * k + n / 2.0));
}

namespace {

// p = r^{2k-2d} times the harmonic part of seed.
FormQ level_representative(int n, int k, int d, const ExponentVector& seed) {
  const FormQ h = harmonic_decompose(FormQ::monomial(seed)).components.at(d);
  return multiply(r_power<Rational>(n, k - d), h);
}

// Scalar lambda with T p = c lambda p if p is an eigenvector; the residual is
// measured in the integral norm, relative to p.
std::pair<Rational, double> read_eigenvalue(const OperatorMatrix& op, const FormQ& p) {
  const FormQ tp = op.apply(p);
  int pivot = 0;
  while (pivot < p.size() && p[pivot] == 0) ++pivot;
  if (pivot == p.size()) throw std::logic_error("t_spectrum: zero representative");
  const Rational lambda = tp[pivot] / (op.c * p[pivot]);
  const FormQ diff = tp / op.c - lambda * p;
  const double res = std::sqrt(std::max(0.0, to_double(integral_ip(diff, diff)))) /
                     std::sqrt(to_double(integral_ip(p, p)));
  return {lambda, res};
}

}  // namespace

std::vector<SpectrumRow> t_spectrum(int n, int two_k) {
  const OperatorMatrix& op = t_matrix(n, two_k);
  const int k = two_k / 2;
  std::vector<SpectrumRow> rows;
  for (int d = 0; d <= k; ++d) {
    SpectrumRow row;
    row.d = d;
    std::vector<int> e1(static_cast<std::size_t>(n), 0);
    e1[0] = 2 * d;
    const auto [lambda, res] = read_eigenvalue(op, level_representative(n, k, d, ExponentVector(e1)));
    row.eigenvalue = lambda;
    row.off_level_residual = res;
    if (d >= 1) {
      std::vector<int> e2(static_cast<std::size_t>(n), 0);
      e2[0] = 2 * d - 1;
      e2[1] = 1;
      const auto [lambda2, res2] = read_eigenvalue(op, level_representative(n, k, d, ExponentVector(e2)));
      row.second_agrees = lambda2 == lambda;
      row.off_level_residual = std::max(row.off_level_residual, res2);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Rational metric_switch_residual(int n, int two_k) {
  const OperatorMatrix& op = t_matrix(n, two_k);
  const auto basis = MonomialBasis::get(n, two_k);
  const MatrixQ& G = gram_matrix_exact(n, two_k, MetricKind::Integral);
  const Rational scale = factorial(two_k);
  Rational worst(0);
  for (int i = 0; i < basis->size(); ++i)
    for (int j = 0; j < basis->size(); ++j) {
      // <T e_i, e_j>_d = (T e_i)_j * alpha_j!
      const Rational lhs = op.matrix(j, i) * exponent_factorial((*basis)[j]);
      const Rational diff = abs_value(Rational(lhs - scale * G(i, j)));
      if (diff > worst) worst = diff;
    }
  return worst;
}

Eigen::MatrixXd apolar_orthonormal_basis(int n, int k) {
  const auto basis = MonomialBasis::get(n, k);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(basis->size(), basis->size());
  for (int a = 0; a < basis->size(); ++a) B(a, a) = 1.0 / std::sqrt(to_double(exponent_factorial((*basis)[a])));
  return B;
}

Catalecticant catalecticant(const FormD& f, MetricKind metric) {
  if (f.degree() % 2 != 0 || f.degree() == 0) throw std::invalid_argument("catalecticant: degree must be even and positive");
  if (metric == MetricKind::Gradient) throw std::invalid_argument("catalecticant: metric must be integral or apolar");
  const int n = f.n();
  const int k = f.degree() / 2;
  const auto big = MonomialBasis::get(n, 2 * k);
  const auto small = MonomialBasis::get(n, k);
  const auto& table = product_table(n, k, k);
  const int s = small->size();

  // w_gamma = <f, x^gamma> in the chosen metric.
  Eigen::VectorXd w(big->size());
  const Eigen::Map<const Eigen::VectorXd> fc(f.coeffs().data(), f.size());
  if (metric == MetricKind::Integral) {
    w = gram_matrix(n, 2 * k, MetricKind::Integral) * fc;
  } else {
    for (int g = 0; g < big->size(); ++g) w[g] = fc[g] * to_double(exponent_factorial((*big)[g]));
  }
  Eigen::MatrixXd mono(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) mono(a, b) = w[table[static_cast<std::size_t>(a * s + b)]];

  const Eigen::MatrixXd B = metric == MetricKind::Integral
                                ? orthonormal_basis({n, k, SpaceKind::Full}, MetricKind::Integral)->basis
                                : apolar_orthonormal_basis(n, k);
  Catalecticant out;
  out.metric = metric;
  out.n = n;
  out.k = k;
  out.matrix = B.transpose() * mono * B;
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

double projection_identity_residual(const FormD& q) {
  if (q.is_zero()) throw std::invalid_argument("projection_identity_residual: q must be nonzero");
  const int n = q.n();
  const int k = q.degree();
  const auto small = MonomialBasis::get(n, k);
  const auto big = MonomialBasis::get(n, 2 * k);
  const auto& table = product_table(n, k, k);
  const int s = small->size();

  // A_q(p) = <p, q>_d^2 over the basis u_a = x^alpha / sqrt(alpha!): a_a = q_a sqrt(alpha!).
  Eigen::VectorXd a(s);
  for (int i = 0; i < s; ++i) a[i] = q[i] * std::sqrt(to_double(exponent_factorial((*small)[i])));
  const Eigen::MatrixXd A = a * a.transpose();

  // H_{x^gamma} for distinct gamma have disjoint supports, hence are mutually
  // orthogonal; the projection is a sum of one-dimensional projections.
  std::vector<double> num(static_cast<std::size_t>(big->size()), 0.0), den(num.size(), 0.0);
  Eigen::MatrixXd entry(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const int g = table[static_cast<std::size_t>(i * s + j)];
      entry(i, j) = to_double(exponent_factorial((*big)[g])) /
                    std::sqrt(to_double(exponent_factorial((*small)[i]) * exponent_factorial((*small)[j])));
      num[static_cast<std::size_t>(g)] += A(i, j) * entry(i, j);
      den[static_cast<std::size_t>(g)] += entry(i, j) * entry(i, j);
    }
  Eigen::MatrixXd projected(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const auto g = static_cast<std::size_t>(table[static_cast<std::size_t>(i * s + j)]);
      projected(i, j) = num[g] / den[g] * entry(i, j);
    }
  const Eigen::MatrixXd H = catalecticant(multiply(q, q), MetricKind::Apolar).matrix;
  const double scale = 1.0 / to_double(binomial(2 * k, k));
  return (projected - scale * H).norm();
}

}  // namespace conelab

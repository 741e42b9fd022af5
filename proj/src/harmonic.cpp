#include "conelab/harmonic.hpp"

#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "conelab/metrics.hpp"
#include "conelab/rng.hpp"

namespace conelab {

namespace {

MatrixQ exact_inverse(MatrixQ a) {
  const Eigen::Index n = a.rows();
  MatrixQ inv = MatrixQ::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::runtime_error("exact_inverse: singular matrix");
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      inv.row(pivot).swap(inv.row(col));
    }
    const Rational p = a(col, col);
    a.row(col) /= p;
    inv.row(col) /= p;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational factor = a(r, col);
      a.row(r) -= factor * a.row(col);
      inv.row(r) -= factor * inv.row(col);
    }
  }
  return inv;
}

// Matrix of g -> Laplacian(r^2 g) on P_{n,m} (monomial coordinates), inverted.
struct LaplaceInverse {
  MatrixQ exact;
  Eigen::MatrixXd numeric;
};

const LaplaceInverse& laplace_r2_inverse(int n, int m) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const LaplaceInverse>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, m}); it != cache.end()) return *it->second;
  }
  const auto basis = MonomialBasis::get(n, m);
  const FormQ r2 = r_power<Rational>(n, 1);
  MatrixQ L(basis->size(), basis->size());
  for (int j = 0; j < basis->size(); ++j) {
    const FormQ image = laplacian(multiply(r2, FormQ::monomial((*basis)[j])));
    for (int i = 0; i < basis->size(); ++i) L(i, j) = image[i];
  }
  auto entry = std::make_unique<LaplaceInverse>();
  entry->exact = exact_inverse(L);
  entry->numeric = entry->exact.unaryExpr([](const Rational& q) { return to_double(q); });
  std::lock_guard lock(mutex);
  return *cache.emplace(std::make_pair(n, m), std::move(entry)).first->second;
}

template <class T>
const Matrix<T>& inverse_as(const LaplaceInverse& li);
template <>
const Matrix<Rational>& inverse_as<Rational>(const LaplaceInverse& li) {
  return li.exact;
}
template <>
const Matrix<double>& inverse_as<double>(const LaplaceInverse& li) {
  return li.numeric;
}

}  // namespace

template <class T>
Form<T> HarmonicDecomposition<T>::level(int d) const {
  auto it = components.find(d);
  if (it == components.end()) return Form<T>(n, two_k);
  return multiply(r_power<T>(n, two_k / 2 - d), it->second);
}

template <class T>
Form<T> HarmonicDecomposition<T>::reconstruct() const {
  Form<T> total(n, two_k);
  for (const auto& [d, h] : components) total += level(d);
  return total;
}

template <class T>
HarmonicDecomposition<T> harmonic_decompose(const Form<T>& f) {
  if (f.degree() % 2 != 0) throw std::invalid_argument("harmonic_decompose: odd degree");
  HarmonicDecomposition<T> out;
  out.n = f.n();
  out.two_k = f.degree();
  Form<T> rest = f;
  while (rest.degree() > 0) {
    const int m = rest.degree();
    const Form<T> lap = laplacian(rest);
    const Matrix<T>& inv = inverse_as<T>(laplace_r2_inverse(f.n(), m - 2));
    const Vector<T> rhs = Eigen::Map<const Vector<T>>(lap.coeffs().data(), lap.size());
    const Vector<T> g = inv * rhs;
    Form<T> gf(f.n(), m - 2, std::vector<T>(g.data(), g.data() + g.size()));
    out.components.emplace(m / 2, rest - multiply(r_power<T>(f.n(), 1), gf));
    rest = std::move(gf);
  }
  out.components.emplace(0, rest);
  return out;
}

std::vector<std::int64_t> harmonic_dims(int n, int two_k) {
  if (n < 2) throw std::invalid_argument("harmonic_dims: n must be at least 2");
  std::vector<std::int64_t> dims;
  for (int d = 0; 2 * d <= two_k; ++d)
    dims.push_back(dim_forms(n, 2 * d) - (d > 0 ? dim_forms(n, 2 * d - 2) : 0));
  return dims;
}

Rational metric_ratio_formula(int n, int k, int d) {
  return Rational(2 * k * k + d * (n - 2) + 2 * d * d, 2 * k * k);
}

std::vector<MetricRatioRow> metric_ratio_table(int n, int k, std::uint64_t seed) {
  if (n < 2 || k < 1) throw std::invalid_argument("metric_ratio_table: need n >= 2, k >= 1");
  const auto dims = harmonic_dims(n, 2 * k);
  std::vector<MetricRatioRow> rows;
  for (int d = 0; d <= k; ++d) {
    MetricRatioRow row;
    row.d = d;
    row.dimension = dims[static_cast<std::size_t>(d)];
    row.formula = metric_ratio_formula(n, k, d);
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(d));

    std::uniform_int_distribution<int> small(-3, 3);
    for (;;) {
      FormQ g(n, 2 * d);
      for (int i = 0; i < g.size(); ++i) g[i] = Rational(small(rng));
      const FormQ h = harmonic_decompose(g).components.at(d);
      if (h.is_zero()) continue;
      const FormQ f = multiply(r_power<Rational>(n, k - d), h);
      row.exact = gradient_ip(f, f) / integral_ip(f, f);
      break;
    }

    std::normal_distribution<double> normal;
    for (;;) {
      FormD g(n, 2 * d);
      for (int i = 0; i < g.size(); ++i) g[i] = normal(rng);
      const FormD h = harmonic_decompose(g).components.at(d);
      const FormD f = multiply(r_power<double>(n, k - d), h);
      const double l2 = integral_ip(f, f);
      if (std::sqrt(l2) < 1e-8) continue;
      row.numeric = gradient_ip(f, f) / l2;
      break;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double gradient_ball_volume_ratio(int n, int k) {
  const auto dims = harmonic_dims(n, 2 * k);
  const double dm = static_cast<double>(dim_mean_zero(n, 2 * k));
  double log_sum = 0.0;
  for (int d = 1; d <= k; ++d)
    log_sum += static_cast<double>(dims[static_cast<std::size_t>(d)]) * std::log(to_double(metric_ratio_formula(n, k, d)));
  return std::exp(log_sum / (2.0 * dm));
}

bool gradient_ball_bound_holds(int n, int k) {
  const auto dims = harmonic_dims(n, 2 * k);
  Rational product(1);
  for (int d = 1; d <= k; ++d) {
    const Rational r = metric_ratio_formula(n, k, d);
    for (std::int64_t e = 0; e < dims[static_cast<std::size_t>(d)]; ++e) product *= r;
  }
  const Rational bound(4 * k * k + n - 2, 2 * k * k);
  Rational rhs(1);
  for (std::int64_t e = 0; e < dim_mean_zero(n, 2 * k); ++e) rhs *= bound;
  return product >= rhs;
}

template struct HarmonicDecomposition<double>;
template struct HarmonicDecomposition<Rational>;
template HarmonicDecomposition<double> harmonic_decompose<double>(const FormD&);
template HarmonicDecomposition<Rational> harmonic_decompose<Rational>(const FormQ&);

}  // namespace conelab

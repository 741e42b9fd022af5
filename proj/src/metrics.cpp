#include "conelab/metrics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

#include "conelab/errors.hpp"

namespace conelab {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Integral: return "integral";
    case MetricKind::Gradient: return "gradient";
    case MetricKind::Apolar: return "apolar";
  }
  return "unknown";
}

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "integral") return MetricKind::Integral;
  if (name == "gradient") return MetricKind::Gradient;
  if (name == "apolar") return MetricKind::Apolar;
  throw UsageError("unknown metric '" + name + "'");
}

std::int64_t dim_forms(int n, int degree) { return binomial_int(n + degree - 1, degree); }

std::int64_t dim_mean_zero(int n, int two_k) {
  if (two_k % 2 != 0) throw std::invalid_argument("M is defined for even degree only");
  return dim_forms(n, two_k) - 1;
}

// ------------------------------------------------------------------ Gram

namespace {

MatrixQ build_gram(int n, int degree, MetricKind kind) {
  const auto basis = MonomialBasis::get(n, degree);
  const int N = basis->size();
  MatrixQ G = MatrixQ::Zero(N, N);
  switch (kind) {
    case MetricKind::Integral:
      for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b) {
          G(a, b) = sphere_moment((*basis)[a] + (*basis)[b]);
          G(b, a) = G(a, b);
        }
      break;
    case MetricKind::Apolar:
      for (int a = 0; a < N; ++a) G(a, a) = exponent_factorial((*basis)[a]);
      break;
    case MetricKind::Gradient: {
      if (degree < 2) throw std::invalid_argument("gradient metric needs degree >= 2");
      const Rational scale = Rational(1, degree * degree);
      for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b) {
          Rational s(0);
          const auto& al = (*basis)[a];
          const auto& be = (*basis)[b];
          for (int i = 0; i < n; ++i) {
            if (al[i] == 0 || be[i] == 0) continue;
            std::vector<int> e = (al + be).entries();
            e[static_cast<std::size_t>(i)] -= 2;
            s += Rational(al[i] * be[i]) * sphere_moment(ExponentVector(std::move(e)));
          }
          G(a, b) = s * scale;
          G(b, a) = G(a, b);
        }
      break;
    }
  }
  return G;
}

struct GramEntry {
  MatrixQ exact;
  Eigen::MatrixXd numeric;
};

const GramEntry& gram_entry(int n, int degree, MetricKind kind) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, MetricKind>, std::unique_ptr<const GramEntry>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, degree, kind}); it != cache.end()) return *it->second;
  }
  auto entry = std::make_unique<GramEntry>();
  entry->exact = build_gram(n, degree, kind);
  entry->numeric = entry->exact.unaryExpr([](const Rational& q) { return to_double(q); });
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(std::make_tuple(n, degree, kind), std::move(entry));
  return *it->second;
}

template <class T>
const Matrix<T>& gram_as(int n, int degree, MetricKind kind);

template <>
const Matrix<Rational>& gram_as<Rational>(int n, int degree, MetricKind kind) {
  return gram_entry(n, degree, kind).exact;
}

template <>
const Matrix<double>& gram_as<double>(int n, int degree, MetricKind kind) {
  return gram_entry(n, degree, kind).numeric;
}

template <class T>
T bilinear(const Matrix<T>& G, const Form<T>& f, const Form<T>& g) {
  T total(0);
  for (int a = 0; a < f.size(); ++a) {
    if (f[a] == T(0)) continue;
    T row(0);
    for (int b = 0; b < g.size(); ++b)
      if (g[b] != T(0)) row += G(a, b) * g[b];
    total += f[a] * row;
  }
  return total;
}

template <class T>
void require_same_space(const Form<T>& f, const Form<T>& g, const char* what) {
  if (f.n() != g.n() || f.degree() != g.degree())
    throw std::invalid_argument(std::string(what) + ": forms must share n and degree");
}

}  // namespace

const MatrixQ& gram_matrix_exact(int n, int degree, MetricKind kind) { return gram_entry(n, degree, kind).exact; }
const Eigen::MatrixXd& gram_matrix(int n, int degree, MetricKind kind) { return gram_entry(n, degree, kind).numeric; }

template <class T>
T integral_ip(const Form<T>& f, const Form<T>& g) {
  require_same_space(f, g, "integral_ip");
  return bilinear(gram_as<T>(f.n(), f.degree(), MetricKind::Integral), f, g);
}

template <class T>
T apolar_ip(const Form<T>& f, const Form<T>& g) {
  require_same_space(f, g, "apolar_ip");
  T total(0);
  for (int a = 0; a < f.size(); ++a)
    if (f[a] != T(0) && g[a] != T(0))
      total += f[a] * g[a] * scalar_from_rational<T>(exponent_factorial(f.basis()[a]));
  return total;
}

template <class T>
T gradient_ip(const Form<T>& f, const Form<T>& g) {
  require_same_space(f, g, "gradient_ip");
  if (f.degree() < 2) throw std::invalid_argument("gradient_ip: degree must be at least 2");
  return bilinear(gram_as<T>(f.n(), f.degree(), MetricKind::Gradient), f, g);
}

template <class T>
T inner_product(MetricKind kind, const Form<T>& f, const Form<T>& g) {
  switch (kind) {
    case MetricKind::Integral: return integral_ip(f, g);
    case MetricKind::Gradient: return gradient_ip(f, g);
    case MetricKind::Apolar: return apolar_ip(f, g);
  }
  throw std::logic_error("unreachable");
}

double integral_norm(const FormD& f) { return std::sqrt(std::max(0.0, integral_ip(f, f))); }
double gradient_norm(const FormD& f) { return std::sqrt(std::max(0.0, gradient_ip(f, f))); }

// ---------------------------------------------------------- orthonormal bases

FormD GramData::element(int i) const {
  const Eigen::VectorXd col = basis.col(i);
  return FormD(space.n, space.degree, std::vector<double>(col.data(), col.data() + col.size()));
}

Eigen::VectorXd GramData::coordinates(const FormD& f) const {
  const Eigen::Map<const Eigen::VectorXd> c(f.coeffs().data(), f.size());
  return basis.transpose() * (gram * c);
}

FormD GramData::form_from_coordinates(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd c = basis * z;
  return FormD(space.n, space.degree, std::vector<double>(c.data(), c.data() + c.size()));
}

namespace {

std::shared_ptr<const GramData> build_basis(const SpaceDescriptor& space, MetricKind metric) {
  auto data = std::make_shared<GramData>();
  data->space = space;
  data->metric = metric;
  const MatrixQ& G = gram_matrix_exact(space.n, space.degree, metric);
  data->gram = gram_matrix(space.n, space.degree, metric);
  const int N = static_cast<int>(G.rows());

  // Z spans the space in monomial coordinates (exact).
  MatrixQ Z;
  if (space.kind == SpaceKind::Full) {
    Z = MatrixQ::Identity(N, N);
  } else {
    if (space.degree % 2 != 0) throw std::invalid_argument("M needs even degree");
    const auto basis = MonomialBasis::get(space.n, space.degree);
    VectorQ moments(N);
    for (int a = 0; a < N; ++a) moments[a] = sphere_moment((*basis)[a]);
    const int pivot = 0;  // x1^{2k}, nonzero moment
    Z = MatrixQ::Zero(N, N - 1);
    int col = 0;
    for (int j = 0; j < N; ++j) {
      if (j == pivot) continue;
      Z(j, col) = Rational(1);
      Z(pivot, col) = -moments[j] / moments[pivot];
      ++col;
    }
  }
  const MatrixQ restricted = Z.transpose() * G * Z;
  const Eigen::MatrixXd Rd = restricted.unaryExpr([](const Rational& q) { return to_double(q); });
  const Eigen::MatrixXd Zd = Z.unaryExpr([](const Rational& q) { return to_double(q); });
  Eigen::LLT<Eigen::MatrixXd> llt(Rd);
  if (llt.info() != Eigen::Success)
    throw NumericError("orthonormal_basis: Gram matrix of " + to_string(metric) + " metric is not positive definite");
  // B = Z L^{-T}  =>  B^T G B = L^{-1} (Z^T G Z) L^{-T} = I
  const Eigen::MatrixXd Linv_t =
      llt.matrixL().solve(Eigen::MatrixXd::Identity(Rd.rows(), Rd.cols())).transpose();
  data->basis = Zd * Linv_t;
  data->dimension = static_cast<int>(data->basis.cols());
  return data;
}

}  // namespace

std::shared_ptr<const GramData> orthonormal_basis(const SpaceDescriptor& space, MetricKind metric) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, SpaceKind, MetricKind>, std::shared_ptr<const GramData>> cache;
  const auto key = std::make_tuple(space.n, space.degree, space.kind, metric);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = build_basis(space, metric);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(built)).first->second;
}

// ------------------------------------------------------------------ M, q_v

template <class T>
Form<T> project_to_M(const Form<T>& f) {
  if (f.degree() % 2 != 0) throw std::invalid_argument("project_to_M: odd degree");
  return f - sphere_integral(f) * r_power<T>(f.n(), f.degree() / 2);
}

FormD evaluation_kernel(std::span<const double> v, int n, int two_k) {
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("evaluation_kernel: v must have n entries");
  double len2 = 0.0;
  for (double x : v) len2 += x * x;
  if (std::abs(std::sqrt(len2) - 1.0) > 1e-12) throw std::invalid_argument("evaluation_kernel: v must be a unit vector");
  const auto onb = orthonormal_basis({n, two_k, SpaceKind::MeanZero}, MetricKind::Integral);
  const auto basis = MonomialBasis::get(n, two_k);
  Eigen::VectorXd monomial_values(basis->size());
  for (int m = 0; m < basis->size(); ++m) {
    double t = 1.0;
    for (int i = 0; i < n; ++i) t *= std::pow(v[static_cast<std::size_t>(i)], (*basis)[m][i]);
    monomial_values[m] = t;
  }
  const Eigen::VectorXd e_at_v = onb->basis.transpose() * monomial_values;
  return onb->form_from_coordinates(e_at_v);
}

// ---------------------------------------------------------------- sphere norms

NormEstimate lp_norm(const FormD& f, double p, std::uint64_t seed, int samples) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  NormEstimate out;
  const double rounded = std::round(p);
  if (rounded == p && static_cast<long>(rounded) % 2 == 0) {
    const double integral = sphere_integral(power(f, static_cast<int>(rounded)));
    out.value = std::pow(std::max(0.0, integral), 1.0 / p);
    out.ci_low = out.ci_high = out.value;
    out.exact = true;
    return out;
  }
  Rng rng(seed);
  std::normal_distribution<double> normal;
  const FormEvaluator eval(f);
  double sum = 0.0, sum2 = 0.0;
  Eigen::VectorXd x(f.n());
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < f.n(); ++i) x[i] = normal(rng);
    x.normalize();
    const double t = std::pow(std::abs(eval.value(x)), p);
    sum += t;
    sum2 += t * t;
  }
  const double mean = sum / samples;
  const double se = std::sqrt(std::max(0.0, sum2 / samples - mean * mean) / samples);
  out.value = std::pow(mean, 1.0 / p);
  out.ci_low = std::pow(std::max(0.0, mean - 1.96 * se), 1.0 / p);
  out.ci_high = std::pow(mean + 1.96 * se, 1.0 / p);
  out.samples = samples;
  return out;
}

double linf_norm(const FormD& f, const SphereSearchOptions& options) {
  const auto ext = sphere_extrema(f, options);
  return std::max(ext.max.value, -ext.min.value);
}

double max_gradient_square(const FormD& f, const SphereSearchOptions& options) {
  return maximize_on_sphere_search(gradient_square(f), options).value;
}

double barvinok_factor(int n, int two_k) {
  const int top = two_k * n;
  // log binomial(top + n - 1, top) via lgamma keeps this finite for large n.
  const double log_binom = std::lgamma(top + n) - std::lgamma(top + 1) - std::lgamma(n);
  return std::exp(log_binom / (2.0 * n));
}

// ----------------------------------------------------------------- sampling

FormD gaussian_form(int n, int degree, Rng& rng) {
  const auto onb = orthonormal_basis({n, degree, SpaceKind::Full}, MetricKind::Integral);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(onb->dimension);
  for (int i = 0; i < onb->dimension; ++i) z[i] = normal(rng);
  return onb->form_from_coordinates(z);
}

Eigen::MatrixXd random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

FormD rotate(const FormD& f, const Eigen::MatrixXd& rotation) {
  return substitute(f, Eigen::MatrixXd(rotation.inverse()));
}

// ------------------------------------------------------------ instantiations

#define CONELAB_INSTANTIATE(T)                                              \
  template T integral_ip<T>(const Form<T>&, const Form<T>&);               \
  template T apolar_ip<T>(const Form<T>&, const Form<T>&);                 \
  template T gradient_ip<T>(const Form<T>&, const Form<T>&);               \
  template T inner_product<T>(MetricKind, const Form<T>&, const Form<T>&); \
  template Form<T> project_to_M<T>(const Form<T>&);

CONELAB_INSTANTIATE(double)
CONELAB_INSTANTIATE(Rational)

#undef CONELAB_INSTANTIATE

}  // namespace conelab

#include "conelab/sphere_opt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include "conelab/rng.hpp"

namespace conelab {

namespace {

std::vector<Eigen::VectorXd> make_grid(int n, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  if (n == 1) {
    pts.push_back(Eigen::VectorXd::Constant(1, 1.0));
    pts.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return pts;
  }
  if (n == 2) {
    for (int j = 0; j < count; ++j) {
      const double t = 2.0 * M_PI * (j + 0.5) / count;
      Eigen::VectorXd x(2);
      x << std::cos(t), std::sin(t);
      pts.push_back(x);
    }
    return pts;
  }
  if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - (2.0 * j + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Eigen::VectorXd x(3);
      x << r * std::cos(golden * j), r * std::sin(golden * j), z;
      pts.push_back(x);
    }
    return pts;
  }
  for (int i = 0; i < n && static_cast<int>(pts.size()) + 2 <= count; ++i) {
    pts.push_back(Eigen::VectorXd::Unit(n, i));
    pts.push_back(-Eigen::VectorXd::Unit(n, i));
  }
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n)));
  std::normal_distribution<double> normal;
  while (static_cast<int>(pts.size()) < count) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    const double len = x.norm();
    if (len < 1e-12) continue;
    pts.push_back(x / len);
  }
  return pts;
}

// Rows: grid points; columns: monomials of P_{n,d} in basis order.
const Eigen::MatrixXd& grid_monomial_values(int n, int degree, int count, std::uint64_t seed) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, std::uint64_t>, std::unique_ptr<const Eigen::MatrixXd>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, degree, count, seed}); it != cache.end()) return *it->second;
  }
  const auto& grid = sphere_grid(n, count, seed);
  const auto basis = MonomialBasis::get(n, degree);
  auto values = std::make_unique<Eigen::MatrixXd>(static_cast<Eigen::Index>(grid.size()), basis->size());
  std::vector<double> pw(static_cast<std::size_t>(n * (degree + 1)));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int i = 0; i < n; ++i) {
      pw[static_cast<std::size_t>(i * (degree + 1))] = 1.0;
      for (int e = 1; e <= degree; ++e)
        pw[static_cast<std::size_t>(i * (degree + 1) + e)] = pw[static_cast<std::size_t>(i * (degree + 1) + e - 1)] * grid[p][i];
    }
    for (int m = 0; m < basis->size(); ++m) {
      double v = 1.0;
      const auto& a = (*basis)[m];
      for (int i = 0; i < n; ++i) v *= pw[static_cast<std::size_t>(i * (degree + 1) + a[i])];
      (*values)(static_cast<Eigen::Index>(p), m) = v;
    }
  }
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(std::make_tuple(n, degree, count, seed), std::move(values));
  return *it->second;
}

std::vector<int> best_indices(const Eigen::VectorXd& values, int k, bool smallest) {
  std::vector<int> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min<int>(k, static_cast<int>(idx.size()));
  auto cmp = [&](int a, int b) { return smallest ? values[a] < values[b] : values[a] > values[b]; };
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), cmp);
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

SphereExtremum search(const FormD& f, const SphereSearchOptions& options, int sign) {
  const auto& grid = sphere_grid(f.n(), options.starts, options.seed);
  const auto& values = grid_monomial_values(f.n(), f.degree(), options.starts, options.seed);
  const Eigen::Map<const Eigen::VectorXd> c(f.coeffs().data(), f.size());
  const Eigen::VectorXd on_grid = values * c;
  const FormEvaluator eval(f);
  SphereExtremum best;
  bool have = false;
  for (int i : best_indices(on_grid, options.refine, sign > 0)) {
    auto cand = polish_on_sphere(eval, grid[static_cast<std::size_t>(i)], sign, options.max_steps);
    if (!have || sign * cand.value < sign * best.value) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

}  // namespace

const std::vector<Eigen::VectorXd>& sphere_grid(int n, int count, std::uint64_t seed) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, std::uint64_t>, std::unique_ptr<const std::vector<Eigen::VectorXd>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, count, seed}];
  if (!slot) slot = std::make_unique<const std::vector<Eigen::VectorXd>>(make_grid(n, count, seed));
  return *slot;
}

FormEvaluator::FormEvaluator(const FormD& f)
    : n_(f.n()), degree_(f.degree()), powers_(static_cast<std::size_t>(f.n() * (f.degree() + 1))) {
  for (int m = 0; m < f.size(); ++m) {
    if (f[m] == 0.0) continue;
    coeffs_.push_back(f[m]);
    for (int i = 0; i < n_; ++i) exponents_.push_back(f.basis()[m][i]);
  }
}

double FormEvaluator::value(const Eigen::VectorXd& x) const {
  const int stride = degree_ + 1;
  for (int i = 0; i < n_; ++i) {
    powers_[static_cast<std::size_t>(i * stride)] = 1.0;
    for (int e = 1; e <= degree_; ++e)
      powers_[static_cast<std::size_t>(i * stride + e)] = powers_[static_cast<std::size_t>(i * stride + e - 1)] * x[i];
  }
  double total = 0.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    double t = coeffs_[m];
    const int* a = &exponents_[m * static_cast<std::size_t>(n_)];
    for (int i = 0; i < n_; ++i) t *= powers_[static_cast<std::size_t>(i * stride + a[i])];
    total += t;
  }
  return total;
}

double FormEvaluator::value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
  const int stride = degree_ + 1;
  for (int i = 0; i < n_; ++i) {
    powers_[static_cast<std::size_t>(i * stride)] = 1.0;
    for (int e = 1; e <= degree_; ++e)
      powers_[static_cast<std::size_t>(i * stride + e)] = powers_[static_cast<std::size_t>(i * stride + e - 1)] * x[i];
  }
  grad.setZero(n_);
  double total = 0.0;
  std::vector<double> prefix(static_cast<std::size_t>(n_ + 1)), suffix(static_cast<std::size_t>(n_ + 1));
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    const int* a = &exponents_[m * static_cast<std::size_t>(n_)];
    prefix[0] = 1.0;
    for (int i = 0; i < n_; ++i) prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] * powers_[static_cast<std::size_t>(i * stride + a[i])];
    suffix[static_cast<std::size_t>(n_)] = 1.0;
    for (int i = n_ - 1; i >= 0; --i) suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i + 1)] * powers_[static_cast<std::size_t>(i * stride + a[i])];
    const double c = coeffs_[m];
    total += c * prefix[static_cast<std::size_t>(n_)];
    for (int i = 0; i < n_; ++i) {
      if (a[i] == 0) continue;
      grad[i] += c * a[i] * powers_[static_cast<std::size_t>(i * stride + a[i] - 1)] * prefix[static_cast<std::size_t>(i)] *
                 suffix[static_cast<std::size_t>(i + 1)];
    }
  }
  return total;
}

SphereExtremum polish_on_sphere(const FormEvaluator& f, Eigen::VectorXd x, int sign, int max_steps) {
  x.normalize();
  Eigen::VectorXd g(f.n());
  double fx = f.value_and_gradient(x, g);
  double step = -1.0;
  for (int it = 0; it < max_steps; ++it) {
    Eigen::VectorXd gt = g - g.dot(x) * x;
    const double gn2 = gt.squaredNorm();
    if (gn2 <= 1e-26 * std::max(1.0, g.squaredNorm())) break;
    if (step < 0) step = 0.25 / std::sqrt(gn2);
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::VectorXd y = x - sign * step * gt;
      y.normalize();
      const double fy = f.value(y);
      if (sign * (fy - fx) <= -1e-4 * step * gn2) {
        x = std::move(y);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    fx = f.value_and_gradient(x, g);
    step *= 2.0;
  }
  return {fx, std::vector<double>(x.data(), x.data() + x.size())};
}

SphereExtremum minimize_on_sphere_search(const FormD& f, const SphereSearchOptions& options) {
  return search(f, options, +1);
}

SphereExtremum maximize_on_sphere_search(const FormD& f, const SphereSearchOptions& options) {
  return search(f, options, -1);
}

SphereExtrema sphere_extrema(const FormD& f, const SphereSearchOptions& options) {
  const auto& grid = sphere_grid(f.n(), options.starts, options.seed);
  const auto& values = grid_monomial_values(f.n(), f.degree(), options.starts, options.seed);
  const Eigen::Map<const Eigen::VectorXd> c(f.coeffs().data(), f.size());
  const Eigen::VectorXd on_grid = values * c;
  const FormEvaluator eval(f);
  SphereExtrema out;
  for (int sign : {+1, -1}) {
    SphereExtremum best;
    bool have = false;
    for (int i : best_indices(on_grid, options.refine, sign > 0)) {
      auto cand = polish_on_sphere(eval, grid[static_cast<std::size_t>(i)], sign, options.max_steps);
      if (!have || sign * cand.value < sign * best.value) {
        best = std::move(cand);
        have = true;
      }
    }
    (sign > 0 ? out.min : out.max) = std::move(best);
  }
  return out;
}

}  // namespace conelab

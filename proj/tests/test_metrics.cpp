#include <doctest.h>

#include <cmath>

#include "conelab/metrics.hpp"
#include "oracles.hpp"

using namespace conelab;

namespace {

double ev(const FormD& f, const Eigen::VectorXd& x) { return evaluate<double>(f, std::span<const double>(x.data(), x.size())); }

FormQ mono(std::vector<int> e, Rational c = 1) { return FormQ::monomial(ExponentVector(std::move(e)), c); }

// D_f(g) by literally applying the derivatives of f to g.
Rational apolar_by_derivatives(const FormQ& f, const FormQ& g) {
  Rational acc = 0;
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    FormQ h = g;
    const auto& a = f.basis()[i];
    for (int v = 0; v < a.size(); ++v)
      for (int t = 0; t < a[v]; ++t) h = differentiate(h, v);
    acc += f[i] * h[0];
  }
  return acc;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("inner products of low-degree monomials") {
  const FormQ x1sq = mono({2, 0, 0}), x2sq = mono({0, 2, 0}), x1x2 = mono({1, 1, 0});
  CHECK(integral_ip(x1sq, x2sq) == Rational(1, 15));
  CHECK(integral_ip(x1x2, x1x2) == Rational(1, 15));
  CHECK(gradient_ip(x1x2, x1x2) == Rational(1, 6));
  CHECK(gradient_ip(r_power<Rational>(3, 1), r_power<Rational>(3, 1)) == 1);
  const FormQ h = x1sq - r_power<Rational>(3, 1) / Rational(3);
  CHECK(gradient_ip(h, h) / integral_ip(h, h) == Rational(5, 2));
  CHECK(integral_norm(to_numeric(mono({2, 0, 0}))) == doctest::Approx(std::sqrt(0.2)));
  CHECK(gradient_norm(to_numeric(x1x2)) == doctest::Approx(std::sqrt(1.0 / 6.0)));
}

TEST_CASE("integral and gradient inner products match quadrature") {
  Rng rng(11);
  for (int n = 2; n <= 3; ++n)
    for (int d : {2, 4}) {
      const FormD f = gaussian_form(n, d, rng), g = gaussian_form(n, d, rng);
      const double q = oracle::integrate(n, 2 * d, [&](const Eigen::VectorXd& x) { return ev(f, x) * ev(g, x); });
      CHECK(integral_ip(f, g) == doctest::Approx(q).epsilon(1e-12));
      const double qg = oracle::integrate(n, 2 * d, [&](const Eigen::VectorXd& x) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += ev(differentiate(f, i), x) * ev(differentiate(g, i), x);
        return s;
      });
      CHECK(gradient_ip(f, g) == doctest::Approx(qg / (d * d)).epsilon(1e-12));
    }
}

TEST_CASE("apolar product equals the differential-operator pairing") {
  Rng rng(5);
  std::uniform_int_distribution<int> u(-4, 4);
  for (int n = 2; n <= 4; ++n) {
    FormQ f(n, 4), g(n, 4);
    for (int i = 0; i < f.size(); ++i) f[i] = u(rng), g[i] = u(rng);
    CHECK(apolar_ip(f, g) == apolar_by_derivatives(f, g));
    CHECK(apolar_ip(f, g) == apolar_ip(g, f));
  }
}

TEST_CASE("rotation invariance of the three metrics") {
  Rng rng(9);
  for (int n = 2; n <= 5; ++n) {
    const FormD f = gaussian_form(n, 4, rng), g = gaussian_form(n, 4, rng);
    const Eigen::MatrixXd R = random_rotation(n, rng);
    CHECK((R.transpose() * R - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
    const FormD fr = rotate(f, R), gr = rotate(g, R);
    for (MetricKind m : {MetricKind::Integral, MetricKind::Apolar, MetricKind::Gradient})
      CHECK(inner_product(m, fr, gr) == doctest::Approx(inner_product(m, f, g)).epsilon(1e-10).scale(1));
  }
}

TEST_CASE("orthonormal bases") {
  for (MetricKind m : {MetricKind::Integral, MetricKind::Apolar, MetricKind::Gradient})
    for (SpaceKind s : {SpaceKind::Full, SpaceKind::MeanZero}) {
      const auto data = orthonormal_basis({4, 4, s}, m);
      const Eigen::MatrixXd I = data->basis.transpose() * data->gram * data->basis;
      CHECK((I - Eigen::MatrixXd::Identity(data->dimension, data->dimension)).norm() < 1e-10);
    }
  CHECK(orthonormal_basis({3, 4, SpaceKind::MeanZero}, MetricKind::Integral)->dimension == 14);
  CHECK(dim_mean_zero(3, 4) == 14);
  // P_{2,1}: {sqrt2 x1, sqrt2 x2} up to an orthogonal mix.
  const auto p21 = orthonormal_basis({2, 1, SpaceKind::Full}, MetricKind::Integral);
  const Eigen::MatrixXd B = p21->basis;
  CHECK((B * B.transpose() - 2.0 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("coordinates round trip") {
  Rng rng(1);
  const auto data = orthonormal_basis({3, 4, SpaceKind::Full}, MetricKind::Integral);
  const FormD f = gaussian_form(3, 4, rng);
  CHECK(integral_norm(data->form_from_coordinates(data->coordinates(f)) - f) < 1e-12);
}

TEST_CASE("projection to M") {
  const FormQ p = project_to_M(mono({2, 0, 0}));
  CHECK(p == mono({2, 0, 0}) - r_power<Rational>(3, 1) / Rational(3));
  CHECK(sphere_integral(project_to_M(mono({2, 2, 0}))) == 0);
}

TEST_CASE("evaluation kernel reproduces point values") {
  Rng rng(2);
  for (auto [n, d] : {std::pair{3, 2}, std::pair{3, 4}, std::pair{4, 4}}) {
    Eigen::VectorXd v = Eigen::VectorXd::Random(n).normalized();
    const FormD q = evaluation_kernel(std::span<const double>(v.data(), n), n, d);
    CHECK(integral_norm(q) == doctest::Approx(std::sqrt(double(dim_mean_zero(n, d)))).epsilon(1e-10));
    for (int t = 0; t < 3; ++t) {
      const FormD f = project_to_M(gaussian_form(n, d, rng));
      CHECK(integral_ip(q, f) == doctest::Approx(ev(f, v)).epsilon(1e-10).scale(1));
    }
    const Eigen::MatrixXd R = random_rotation(n, rng);
    const Eigen::VectorXd Rv = R * v;
    const FormD qr = evaluation_kernel(std::span<const double>(Rv.data(), n), n, d);
    CHECK(integral_norm(qr - rotate(q, R)) < 1e-10);
  }
}

TEST_CASE("Gaussian forms have the chi-square mean") {
  Rng rng(21);
  const int draws = 10000;
  const int dim = static_cast<int>(dim_forms(3, 2));
  const auto data = orthonormal_basis({3, 2, SpaceKind::Full}, MetricKind::Integral);
  double s = 0, s2 = 0, cov = 0;
  for (int i = 0; i < draws; ++i) {
    const FormD f = gaussian_form(3, 2, rng);
    const double v = integral_ip(f, f);
    s += v;
    s2 += v * v;
    const Eigen::VectorXd z = data->coordinates(f);
    cov += z[0] * z[1];
  }
  const double mean = s / draws, se = std::sqrt((s2 / draws - mean * mean) / draws);
  CHECK(std::abs(mean - dim) < 3 * se);
  CHECK(std::abs(cov / draws) < 3.0 / std::sqrt(double(draws)));
}

TEST_CASE("Lp and sup norms") {
  const FormD x1sq = to_numeric(mono({2, 0, 0}));
  const NormEstimate l2 = lp_norm(x1sq, 2);
  CHECK(l2.exact);
  CHECK(l2.value == doctest::Approx(std::sqrt(0.2)));
  CHECK(linf_norm(x1sq) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(linf_norm(to_numeric(mono({1, 1, 0}))) == doctest::Approx(0.5).epsilon(1e-9));
  // Monte Carlo branch brackets the exact value for an odd p.
  const NormEstimate l3 = lp_norm(x1sq, 3, 4, 100000);
  const double exact = std::cbrt(oracle::moment_gamma({6, 0, 0}));
  CHECK(l3.ci_low - 1e-3 <= exact);
  CHECK(exact <= l3.ci_high + 1e-3);
}

TEST_CASE("Barvinok factor stays below 2 sqrt(2k+1)") {
  for (int n = 2; n <= 50; ++n)
    for (int k = 1; k <= 5; ++k) CHECK(barvinok_factor(n, 2 * k) <= 2.0 * std::sqrt(2.0 * k + 1.0));
}

}  // TEST_SUITE

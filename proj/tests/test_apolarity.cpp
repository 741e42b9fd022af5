#include <doctest.h>

#include <cmath>

#include "conelab/apolarity.hpp"
#include "conelab/metrics.hpp"
#include "oracles.hpp"

using namespace conelab;

namespace {

double ev(const FormD& f, const Eigen::VectorXd& x) { return evaluate<double>(f, std::span<const double>(x.data(), x.size())); }
FormQ mono(std::vector<int> e, Rational c = 1) { return FormQ::monomial(ExponentVector(std::move(e)), c); }

double min_eig(const Eigen::MatrixXd& M) { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues()[0]; }

}  // namespace

TEST_SUITE("apolarity") {

TEST_CASE("T on small examples") {
  CHECK(t_matrix(3, 2).apply(mono({1, 1, 0})) == mono({1, 1, 0}, Rational(2, 15)));
  CHECK(t_matrix(3, 2).apply(r_power<Rational>(3, 1)) == r_power<Rational>(3, 1) / Rational(3));
  CHECK(t_matrix(3, 2).c == Rational(1, 3));
  CHECK(t_matrix(3, 4).c == Rational(1, 5));
}

TEST_CASE("T matches quadrature of f(v) (v.x)^2k") {
  Rng rng(13);
  for (int n = 2; n <= 3; ++n)
    for (int d : {2, 4}) {
      const FormD f = gaussian_form(n, d, rng);
      const FormD Tf = t_matrix(n, d).apply(f);
      for (int t = 0; t < 4; ++t) {
        const Eigen::VectorXd x = Eigen::VectorXd::Random(n);
        const double q = oracle::integrate(n, 2 * d, [&](const Eigen::VectorXd& v) { return ev(f, v) * std::pow(v.dot(x), d); });
        CHECK(ev(Tf, x) == doctest::Approx(q).epsilon(1e-11).scale(1));
      }
    }
}

TEST_CASE("c from moments equals the Gamma formula") {
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= 4; ++k) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[0] = 2 * k;
      CHECK(sphere_moment(ExponentVector(e)) == c_gamma_exact(n, k));
      CHECK(c_gamma_numeric(n, k) == doctest::Approx(oracle::moment_gamma(e)).epsilon(1e-12));
    }
}

TEST_CASE("spectrum values") {
  CHECK(t_spectrum(3, 2).back().eigenvalue == Rational(2, 5));
  CHECK(t_spectrum(3, 4).back().eigenvalue == Rational(8, 63));
  CHECK(t_spectrum(2, 4).back().eigenvalue == Rational(1, 6));
  const auto s34 = t_spectrum(3, 4);
  CHECK(s34[0].eigenvalue == 1);
  CHECK(s34[1].eigenvalue == Rational(4, 7));
  const auto s44 = t_spectrum(4, 4);
  CHECK(s44[1].eigenvalue == Rational(1, 2));
  CHECK(s44[2].eigenvalue == Rational(1, 10));
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= 3; ++k) {
      const auto rows = t_spectrum(n, 2 * k);
      CHECK(rows.back().eigenvalue == top_contraction_exact(n, k));
      CHECK(to_double(rows.back().eigenvalue) == doctest::Approx(top_contraction_numeric(n, k)).epsilon(1e-10));
      for (const auto& r : rows) {
        CHECK(r.off_level_residual < 1e-10);
        CHECK(r.second_agrees);
      }
    }
}

TEST_CASE("metric switch identity") {
  for (int n = 2; n <= 4; ++n)
    for (int d : {2, 4}) CHECK(metric_switch_residual(n, d) == 0);
  // Also through an independent pairing on random integer forms.
  Rng rng(6);
  std::uniform_int_distribution<int> u(-3, 3);
  FormQ f(3, 4), g(3, 4);
  for (int i = 0; i < f.size(); ++i) f[i] = u(rng), g[i] = u(rng);
  CHECK(apolar_ip(t_matrix(3, 4).apply(f), g) == factorial(4) * integral_ip(f, g));
}

TEST_CASE("catalecticants") {
  const FormD f = to_numeric(mono({2, 0}) - mono({0, 2}));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(catalecticant(f, MetricKind::Integral).matrix);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-0.5));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.5));
  Rng rng(17);
  for (int n = 2; n <= 4; ++n) {
    const FormD m = project_to_M(gaussian_form(n, 4, rng));
    CHECK(std::abs(catalecticant(m, MetricKind::Integral).matrix.trace()) < 1e-10);
    // Integral catalecticant entries <f, e_i e_j> through quadrature at n <= 3.
    if (n <= 3) {
      const auto onb = orthonormal_basis({n, 2, SpaceKind::Full}, MetricKind::Integral);
      const Eigen::MatrixXd H = catalecticant(m, MetricKind::Integral).matrix;
      for (int i = 0; i < onb->dimension; ++i)
        for (int j = 0; j < onb->dimension; ++j) {
          const double q = oracle::integrate(n, 8, [&](const Eigen::VectorXd& x) {
            return ev(m, x) * ev(onb->element(i), x) * ev(onb->element(j), x);
          });
          CHECK(H(i, j) == doctest::Approx(q).epsilon(1e-10).scale(1));
        }
    }
  }
  // Powers of linear forms have PSD apolar catalecticant (rank one).
  std::vector<double> v{0.3, -1.2, 0.7};
  const Eigen::MatrixXd Hv = catalecticant(linear_form_power<double>(std::span<const double>(v), 4), MetricKind::Apolar).matrix;
  CHECK(min_eig(Hv) > -1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev2(Hv);
  CHECK(ev2.eigenvalues()[Hv.rows() - 2] < 1e-10 * ev2.eigenvalues()[Hv.rows() - 1]);
}

TEST_CASE("apolar orthonormal basis") {
  const Eigen::MatrixXd B = apolar_orthonormal_basis(3, 2);
  const Eigen::MatrixXd G = gram_matrix(3, 2, MetricKind::Apolar);
  CHECK((B.transpose() * G * B - Eigen::MatrixXd::Identity(B.cols(), B.cols())).norm() < 1e-12);
}

TEST_CASE("projection identity on x1^k and Gaussian q") {
  CHECK(projection_identity_residual(to_numeric(mono({2, 0, 0}))) <= 1e-9);
  Rng rng(19);
  for (int t = 0; t < 20; ++t) CHECK(projection_identity_residual(gaussian_form(3, 2, rng)) <= 1e-9);
  CHECK(projection_identity_residual(gaussian_form(4, 2, rng)) <= 1e-9);
}

}  // TEST_SUITE

#include <doctest.h>

#include "conelab/harmonic.hpp"
#include "conelab/metrics.hpp"

using namespace conelab;

namespace {
FormQ mono(std::vector<int> e, Rational c = 1) { return FormQ::monomial(ExponentVector(std::move(e)), c); }
}

TEST_SUITE("harmonic") {

TEST_CASE("x1^2 splits into its harmonic part and r^2/3") {
  const auto hd = harmonic_decompose(mono({2, 0, 0}));
  CHECK(hd.level(1) == mono({2, 0, 0}) - r_power<Rational>(3, 1) / Rational(3));
  CHECK(hd.level(0) == r_power<Rational>(3, 1) / Rational(3));
}

TEST_CASE("constant level of x1^4 is r^4/5") {
  const auto hd = harmonic_decompose(mono({4, 0, 0}));
  CHECK(hd.level(0) == r_power<Rational>(3, 2) / Rational(5));
  CHECK(hd.reconstruct() == mono({4, 0, 0}));
}

TEST_CASE("decomposition is exact, harmonic and orthogonal") {
  Rng rng(4);
  std::uniform_int_distribution<int> u(-5, 5);
  for (auto [n, d] : {std::pair{2, 4}, std::pair{3, 4}, std::pair{3, 6}, std::pair{4, 4}}) {
    FormQ f(n, d);
    for (int i = 0; i < f.size(); ++i) f[i] = u(rng);
    const auto hd = harmonic_decompose(f);
    CHECK(hd.reconstruct() == f);
    for (const auto& [lvl, h] : hd.components) {
      if (h.degree() >= 2) CHECK(laplacian(h).is_zero());
      CHECK(h.degree() == 2 * lvl);
    }
    for (int a = 0; a <= d / 2; ++a)
      for (int b = a + 1; b <= d / 2; ++b) {
        CHECK(integral_ip(hd.level(a), hd.level(b)) == 0);
        CHECK(apolar_ip(hd.level(a), hd.level(b)) == 0);
      }
  }
}

TEST_CASE("decomposition commutes with rotations") {
  Rng rng(8);
  const FormD f = gaussian_form(3, 4, rng);
  const Eigen::MatrixXd R = random_rotation(3, rng);
  const auto a = harmonic_decompose(rotate(f, R));
  const auto b = harmonic_decompose(f);
  for (int d = 0; d <= 2; ++d) CHECK(integral_norm(a.level(d) - rotate(b.level(d), R)) < 1e-10);
}

TEST_CASE("harmonic dimensions") {
  CHECK(harmonic_dims(3, 2) == std::vector<std::int64_t>{1, 5});
  CHECK(harmonic_dims(3, 4).back() == 9);
  CHECK(harmonic_dims(2, 4).back() == 2);
  for (int n = 2; n <= 6; ++n)
    for (int d = 2; d <= 8; d += 2) {
      std::int64_t total = 0;
      for (auto x : harmonic_dims(n, d)) total += x;
      CHECK(total == dim_forms(n, d));
    }
}

TEST_CASE("metric ratio per level") {
  CHECK(metric_ratio_formula(3, 1, 1) == Rational(5, 2));
  CHECK(metric_ratio_formula(3, 2, 1) == Rational(11, 8));
  CHECK(metric_ratio_formula(3, 2, 2) == Rational(9, 4));
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= 3; ++k)
      for (const auto& row : metric_ratio_table(n, k, 3)) {
        CHECK(row.exact == row.formula);
        CHECK(row.numeric == doctest::Approx(to_double(row.formula)).epsilon(1e-10));
      }
}

TEST_CASE("gradient ball volume ratio") {
  CHECK(gradient_ball_volume_ratio(3, 1) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
  const double expect = std::pow(std::pow(11.0 / 8, 5) * std::pow(9.0 / 4, 9), 1.0 / 28);
  CHECK(gradient_ball_volume_ratio(3, 2) == doctest::Approx(expect).epsilon(1e-12));
  // The bound holds for quadratics; for k >= 2 and small n it fails (see README).
  for (int n = 2; n <= 8; ++n) CHECK(gradient_ball_bound_holds(n, 1));
  CHECK_FALSE(gradient_ball_bound_holds(3, 2));
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>

#include "conelab/metrics.hpp"
#include "conelab/volume.hpp"

using namespace conelab;

TEST_SUITE("volume") {

TEST_CASE("uniform samples on S_M") {
  const int n = 3, d = 4, draws = 10000;
  const auto onb = orthonormal_basis({n, d, SpaceKind::MeanZero}, MetricKind::Integral);
  const int D = onb->dimension;
  std::vector<double> s(static_cast<std::size_t>(D)), s2(static_cast<std::size_t>(D));
  for (int i = 0; i < draws; ++i) {
    Rng rng = make_rng(5, static_cast<std::uint64_t>(i));
    const FormD f = sample_uniform_SM(n, d, rng);
    if (i < 20) {
      CHECK(integral_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(sphere_integral(f)) < 1e-12);
    }
    const Eigen::VectorXd z = onb->coordinates(f);
    for (int j = 0; j < D; ++j) {
      s[j] += z[j] * z[j];
      s2[j] += std::pow(z[j], 4);
    }
  }
  for (int j = 0; j < D; ++j) {
    const double mean = s[j] / draws;
    const double se = std::sqrt((s2[j] / draws - mean * mean) / draws);
    CHECK(std::abs(mean - 1.0 / D) < 3.5 * se);
  }
}

TEST_CASE("power mean statistic") {
  std::vector<double> logs{std::log(0.5), std::log(2.0), std::log(1.0)};
  const double D = 3;
  const double naive = std::pow((std::pow(0.5, -D) + std::pow(2.0, -D) + 1.0) / 3.0, 1.0 / D);
  CHECK(std::exp(log_power_mean_inverse(logs, D)) == doctest::Approx(naive).epsilon(1e-14));
  // huge D does not overflow
  std::vector<double> big{std::log(0.1), std::log(10.0)};
  CHECK(std::isfinite(log_power_mean_inverse(big, 5000)));
}

TEST_CASE("unit L2 ball has normalized volume one") {
  const VolumeEstimate e = normalized_volume(body_gauge(Body::L2Ball), 3, 4, 200, 1);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.ci_low == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling does not depend on the thread count") {
  const auto a = sample_gauges(body_gauge(Body::Nonneg), 3, 4, 64, 9, 1);
  const auto b = sample_gauges(body_gauge(Body::Nonneg), 3, 4, 64, 9, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("quadratic cones coincide") {
  const VolumeEstimate c = normalized_volume(body_gauge(Body::Nonneg), 3, 2, 300, 4);
  const VolumeEstimate s = normalized_volume(body_gauge(Body::Sos), 3, 2, 300, 4);
  CHECK(s.value == doctest::Approx(c.value).epsilon(1e-5));
}

TEST_CASE("bound table at (3, 4)") {
  const BoundTable t = bound_table(3, 4);
  CHECK(t.nonneg.lower == doctest::Approx(1.0 / (2 * std::sqrt(10.0) * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(t.nonneg.upper == doctest::Approx(4 * std::sqrt(8.0 / 17)).epsilon(1e-14));
  CHECK(t.alpha == Rational(16, 25));
  CHECK(t.c == Rational(1, 5));
  CHECK(t.dim_M == 14);
  CHECK(t.dim_H == 9);
  CHECK(t.linf_average_bound == doctest::Approx(2 * std::sqrt(30.0)));
  CHECK(t.sq_average_bound == doctest::Approx(256.0 * 24 * std::sqrt(24.0) / 2 / 3));
  CHECK(t.linpowers.lower == doctest::Approx(0.0241).epsilon(1e-3));
  CHECK(t.linpowers.upper == doctest::Approx(3.434).epsilon(1e-3));
  CHECK(&bound_row(t, Body::Sos) == &t.sos);
}

TEST_CASE("window rule uses the widened intervals") {
  VolumeEstimate e;
  e.shrunk = {0.4, 0.35, 0.45};
  e.grown = {0.6, 0.55, 0.65};
  CHECK(volume_in_window(e, {"x", 0.44, 0.56}));
  CHECK_FALSE(volume_in_window(e, {"x", 0.46, 1.0}));
  CHECK_FALSE(volume_in_window(e, {"x", 0.1, 0.5}));
}

TEST_CASE("jensen bound sits below the direct estimate") {
  const VolumeEstimate e = normalized_volume(body_gauge(Body::Nonneg), 3, 4, 500, 12);
  CHECK(e.jensen.value <= e.value);
  CHECK(e.ci_low <= e.value);
  CHECK(e.value <= e.ci_high);
  CHECK(e.tail_share > 0);
  CHECK(e.tail_share <= 1);
}

TEST_CASE("small slope fit") {
  const SlopeFit fit = slope_experiment(Body::Nonneg, 2, 3, 4, 200, 3);
  CHECK(fit.points.size() == 2);
  CHECK(fit.slope < 0);
}

}  // TEST_SUITE

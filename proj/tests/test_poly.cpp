#include <doctest.h>

#include <random>

#include "conelab/errors.hpp"
#include "conelab/poly.hpp"
#include "conelab/polyio.hpp"
#include "conelab/rng.hpp"
#include "oracles.hpp"

using namespace conelab;

namespace {

double ev(const FormD& f, const Eigen::VectorXd& x) { return evaluate<double>(f, std::span<const double>(x.data(), x.size())); }

FormQ x_pow(int n, std::vector<int> e, Rational c = 1) {
  e.resize(static_cast<std::size_t>(n), 0);
  return FormQ::monomial(ExponentVector(e), c);
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("grevlex order starts with x1^d") {
  const auto b = MonomialBasis::get(3, 2);
  REQUIRE(b->size() == 6);
  CHECK((*b)[0] == ExponentVector{2, 0, 0});
  CHECK((*b)[b->size() - 1] == ExponentVector{0, 0, 2});
  for (int i = 0; i + 1 < b->size(); ++i) CHECK(grevlex_before((*b)[i], (*b)[i + 1]));
  CHECK(monomial_basis(4, 4).size() == 35);
}

TEST_CASE("laplacian of x1^2 - r^2/3 vanishes") {
  const FormQ f = x_pow(3, {2}) - r_power<Rational>(3, 1) / Rational(3);
  CHECK(laplacian(f).is_zero());
  CHECK(laplacian(r_power<Rational>(3, 1)) == FormQ::constant(3, 6));
}

TEST_CASE("product, power and derivative agree with pointwise arithmetic") {
  Rng rng(7);
  std::normal_distribution<double> g;
  FormD f(3, 2), h(3, 3);
  for (int i = 0; i < f.size(); ++i) f[i] = g(rng);
  for (int i = 0; i < h.size(); ++i) h[i] = g(rng);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd x(3);
    x << g(rng), g(rng), g(rng);
    CHECK(ev(multiply(f, h), x) == doctest::Approx(ev(f, x) * ev(h, x)).epsilon(1e-12));
    CHECK(ev(power(f, 3), x) == doctest::Approx(std::pow(ev(f, x), 3)).epsilon(1e-12));
    const double eps = 1e-6;
    Eigen::VectorXd xp = x, xm = x;
    xp[1] += eps;
    xm[1] -= eps;
    CHECK(ev(differentiate(h, 1), x) == doctest::Approx((ev(h, xp) - ev(h, xm)) / (2 * eps)).epsilon(1e-6));
  }
}

TEST_CASE("linear form power and substitution") {
  std::vector<Rational> v{1, 2, -1};
  const FormQ p = linear_form_power<Rational>(std::span<const Rational>(v), 2);
  CHECK(p.coeff(ExponentVector{1, 1, 0}) == 4);
  CHECK(p.coeff(ExponentVector{0, 2, 0}) == 4);
  CHECK(p.coeff(ExponentVector{0, 1, 1}) == -4);
  MatrixQ swap = MatrixQ::Zero(3, 3);
  swap(0, 1) = swap(1, 0) = swap(2, 2) = 1;
  CHECK(substitute(x_pow(3, {2, 1}), swap) == x_pow(3, {1, 2}));
}

TEST_CASE("sphere moments of small monomials") {
  CHECK(sphere_moment(ExponentVector{4, 0, 0}) == Rational(1, 5));
  CHECK(sphere_moment(ExponentVector{2, 2, 0}) == Rational(1, 15));
  CHECK(sphere_moment(ExponentVector{3, 1, 0}) == 0);
  CHECK(sphere_moment(ExponentVector{2, 0}) == Rational(1, 2));
}

TEST_CASE("sphere moments match the Gamma formula and quadrature") {
  for (int n = 2; n <= 6; ++n)
    for (int d = 0; d <= 8; d += 2)
      for (const auto& a : monomial_basis(n, d))
        CHECK(to_double(sphere_moment(a)) == doctest::Approx(oracle::moment_gamma(a.entries())).epsilon(1e-13));
  for (int n = 2; n <= 3; ++n)
    for (const auto& a : monomial_basis(n, 6)) {
      const double q = oracle::integrate(n, 6, [&](const Eigen::VectorXd& x) {
        double p = 1;
        for (int i = 0; i < n; ++i) p *= std::pow(x[i], a[i]);
        return p;
      });
      CHECK(sphere_moment_numeric(a) == doctest::Approx(q).epsilon(1e-12).scale(1));
    }
}

TEST_CASE("r^2k integrates to one") {
  for (int n = 2; n <= 5; ++n)
    for (int k = 0; k <= 3; ++k) CHECK(sphere_integral(r_power<Rational>(n, k)) == 1);
}

}  // TEST_SUITE

TEST_SUITE("polyio") {

TEST_CASE("exact round trip is bit exact") {
  FormQ f = x_pow(3, {4}, Rational(1, 3)) - x_pow(3, {2, 2}, Rational(-7, 11)) + x_pow(3, {0, 1, 3}, Rational(5));
  const std::string text = write_form_text(f);
  CHECK(read_form_exact(text) == f);
  CHECK(write_form_text(read_form_exact(text)) == text);
}

TEST_CASE("numeric round trip is bit exact") {
  Rng rng(3);
  std::normal_distribution<double> g;
  FormD f(4, 4);
  for (int i = 0; i < f.size(); ++i) f[i] = g(rng) / 3.0;
  CHECK(read_form_numeric(write_form_text(f)) == f);
}

TEST_CASE("decimal and fraction coefficients") {
  const FormQ f = read_form_exact(R"({"n": 2, "degree": 2, "terms": [[[2,0], "0.25"], [[0,2], "-3/4"]]})");
  CHECK(f.coeff(ExponentVector{2, 0}) == Rational(1, 4));
  CHECK(f.coeff(ExponentVector{0, 2}) == Rational(-3, 4));
  CHECK(parse_rational("-0.0625") == Rational(-1, 16));
  CHECK(parse_rational("007/010") == Rational(7, 10));
  CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
  CHECK(parse_rational("-0") == 0);
}

TEST_CASE("malformed documents are format errors") {
  CHECK_THROWS_AS(read_form_exact("{"), FormatError);
  CHECK_THROWS_AS(read_form_exact(R"({"n": 2, "degree": 2, "terms": [[[1,0], "1"]]})"), FormatError);
  CHECK_THROWS_AS(read_form_exact(R"({"n": 2, "degree": 2, "terms": [[[2,0], "x"]]})"), FormatError);
  CHECK_THROWS_AS(read_form_exact(R"({"n": 2, "terms": []})"), FormatError);
}

}  // TEST_SUITE

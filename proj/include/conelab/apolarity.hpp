#pragma once

// The averaging operator T(f) = integral of f(v) v^{2k} dsigma(v), its
// eigenvalues on the harmonic levels, and catalecticant quadratic forms
// H_f(g) = <f, g^2> in the integral or apolar metric.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "conelab/metrics.hpp"
#include "conelab/poly.hpp"

namespace conelab {

struct OperatorMatrix {
  int n = 0;
  int two_k = 0;
  MatrixQ matrix;  // T over monomial_basis(n, 2k): T_{beta,alpha} = multinomial(beta) m(alpha+beta)
  Rational c;      // T(r^{2k}) = c r^{2k}
  Eigen::MatrixXd numeric;  // same matrix rounded once

  FormQ apply(const FormQ& f) const;
  FormD apply(const FormD& f) const;
};

// Cached per (n, 2k).
const OperatorMatrix& t_matrix(int n, int two_k);

// Gamma(x + m) / Gamma(x) = x (x+1) ... (x+m-1), exact for rational x.
Rational rising_factorial(const Rational& x, int m);

// c = Gamma((2k+1)/2) Gamma(n/2) / (sqrt(pi) Gamma((n+2k)/2)), assembled exactly
// from rising factorials, and the same expression through std::tgamma.
Rational c_gamma_exact(int n, int k);
double c_gamma_numeric(int n, int k);

// k! Gamma(k+n/2) / Gamma(2k+n/2): eigenvalue of (1/c)T on the top level.
Rational top_contraction_exact(int n, int k);
double top_contraction_numeric(int n, int k);

struct SpectrumRow {
  int d = 0;
  Rational eigenvalue;        // read off a representative of r^{2k-2d} H_{n,2d}
  double off_level_residual;  // |(1/c)T p - lambda p| / |p| in the integral norm
  bool second_agrees = true;  // a second representative gives the same scalar
};

std::vector<SpectrumRow> t_spectrum(int n, int two_k);

// Largest |<T e_i, e_j>_d - (2k)! <e_i, e_j>| over monomial pairs, exact.
Rational metric_switch_residual(int n, int two_k);

struct Catalecticant {
  MetricKind metric = MetricKind::Integral;
  int n = 0;
  int k = 0;
  // Over an orthonormal basis of P_{n,k}: integral-orthonormal for Integral,
  // x^alpha / sqrt(alpha!) for Apolar.
  Eigen::MatrixXd matrix;
};

Catalecticant catalecticant(const FormD& f, MetricKind metric);

// Orthonormal basis of P_{n,k} used by the Apolar catalecticant, as columns.
Eigen::MatrixXd apolar_orthonormal_basis(int n, int k);

// |P(A_q) - binomial(2k,k)^{-1} H_{q^2}| (Frobenius), with P the orthogonal
// projection onto the span of apolar catalecticants.
double projection_identity_residual(const FormD& q);

}  // namespace conelab

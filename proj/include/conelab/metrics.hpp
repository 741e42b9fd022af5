#pragma once

// Inner products on P_{n,d}, their Gram matrices and orthonormal bases,
// the mean-zero hyperplane M, point-evaluation kernels and sphere norms.
//
//   Integral:  <f, g>   = integral of f g over S^{n-1} (probability measure)
//   Gradient:  <f, g>_G = (1/d^2) integral of <grad f, grad g>
//   Apolar:    <f, g>_d = D_f(g) = sum_alpha f_alpha g_alpha alpha!
//
// The gradient norm is ||f||_G = sqrt(<f, f>_G).

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "conelab/poly.hpp"
#include "conelab/rng.hpp"
#include "conelab/sphere_opt.hpp"

namespace conelab {

enum class MetricKind { Integral, Gradient, Apolar };

std::string to_string(MetricKind kind);
MetricKind parse_metric_kind(const std::string& name);

template <class T>
T integral_ip(const Form<T>& f, const Form<T>& g);

template <class T>
T apolar_ip(const Form<T>& f, const Form<T>& g);

template <class T>
T gradient_ip(const Form<T>& f, const Form<T>& g);

template <class T>
T inner_product(MetricKind kind, const Form<T>& f, const Form<T>& g);

double integral_norm(const FormD& f);
double gradient_norm(const FormD& f);

// Gram matrix over monomial_basis(n, degree); built exactly, cached.
const MatrixQ& gram_matrix_exact(int n, int degree, MetricKind kind);
const Eigen::MatrixXd& gram_matrix(int n, int degree, MetricKind kind);

enum class SpaceKind { Full, MeanZero };

struct SpaceDescriptor {
  int n = 0;
  int degree = 0;
  SpaceKind kind = SpaceKind::Full;
};

std::int64_t dim_forms(int n, int degree);       // binomial(n+d-1, d)
std::int64_t dim_mean_zero(int n, int two_k);    // D_M = binomial(n+2k-1, 2k) - 1

struct GramData {
  SpaceDescriptor space;
  MetricKind metric = MetricKind::Integral;
  Eigen::MatrixXd gram;   // metric over the monomial basis of P_{n,d}
  Eigen::MatrixXd basis;  // orthonormal elements as columns, monomial coordinates
  int dimension = 0;

  FormD element(int i) const;
  // Coordinates of f in the orthonormal basis (f must lie in the space).
  Eigen::VectorXd coordinates(const FormD& f) const;
  FormD form_from_coordinates(const Eigen::VectorXd& z) const;
};

// Cached per (space, metric). Throws NumericError if the Gram matrix is not
// positive definite.
std::shared_ptr<const GramData> orthonormal_basis(const SpaceDescriptor& space, MetricKind metric);

// f - (integral of f) r^{2k}.
template <class T>
Form<T> project_to_M(const Form<T>& f);

// q_v in M with <q_v, f> = f(v) for every f in M; requires |v| = 1.
FormD evaluation_kernel(std::span<const double> v, int n, int two_k);

struct NormEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool exact = false;
  int samples = 0;
};

// Even integer p: exact moment assembly of the integral of f^p. Otherwise a
// Monte Carlo estimate with a 95% interval (delta method).
NormEstimate lp_norm(const FormD& f, double p, std::uint64_t seed = 1, int samples = 200000);

double linf_norm(const FormD& f, const SphereSearchOptions& options = {});

// max over the sphere of |grad f|^2, by the same search as linf_norm.
double max_gradient_square(const FormD& f, const SphereSearchOptions& options = {});

// binomial(2kn+n-1, 2kn)^{1/2n}: the factor in ||f||_inf <= factor * ||f||_{2n}
// for f of degree 2k in n variables.
double barvinok_factor(int n, int two_k);

// Form whose coordinates in an integral-orthonormal basis of P_{n,d} are
// independent standard normals.
FormD gaussian_form(int n, int degree, Rng& rng);

// Haar-distributed rotation (QR of a Gaussian matrix, sign-fixed, det = +1).
Eigen::MatrixXd random_rotation(int n, Rng& rng);

// A.f = f(A^{-1} x).
FormD rotate(const FormD& f, const Eigen::MatrixXd& rotation);

}  // namespace conelab

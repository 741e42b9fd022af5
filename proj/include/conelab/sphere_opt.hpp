#pragma once

// Global extrema of a form on the unit sphere: a quasi-uniform grid pass
// (one matrix-vector product against cached monomial values) followed by
// projected gradient descent with backtracking from the best grid points.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "conelab/poly.hpp"

namespace conelab {

struct SphereSearchOptions {
  int starts = 2000;      // grid points evaluated
  int refine = 12;        // best grid points polished by descent
  int max_steps = 200;    // descent iterations per polished point
  std::uint64_t seed = 0x5eedULL;
};

struct SphereExtremum {
  double value = 0.0;
  std::vector<double> point;
};

struct SphereExtrema {
  SphereExtremum min;
  SphereExtremum max;
};

// Quasi-uniform points on S^{n-1}: evenly spaced angles for n = 2, a
// Fibonacci lattice for n = 3, seeded Gaussian directions plus the signed
// coordinate axes for n >= 4. Cached per (n, count, seed).
const std::vector<Eigen::VectorXd>& sphere_grid(int n, int count, std::uint64_t seed);

// Value and gradient of a form at arbitrary points, with the monomial table
// flattened once.
class FormEvaluator {
 public:
  explicit FormEvaluator(const FormD& f);

  int n() const noexcept { return n_; }
  double value(const Eigen::VectorXd& x) const;
  double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;

 private:
  int n_;
  int degree_;
  std::vector<int> exponents_;  // row-major monomial x variable
  std::vector<double> coeffs_;
  mutable std::vector<double> powers_;
};

SphereExtremum minimize_on_sphere_search(const FormD& f, const SphereSearchOptions& options = {});
SphereExtremum maximize_on_sphere_search(const FormD& f, const SphereSearchOptions& options = {});
SphereExtrema sphere_extrema(const FormD& f, const SphereSearchOptions& options = {});

// Descent from a single starting point (sign = +1 minimizes, -1 maximizes).
SphereExtremum polish_on_sphere(const FormEvaluator& f, Eigen::VectorXd x, int sign, int max_steps);

}  // namespace conelab

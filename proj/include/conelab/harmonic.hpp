#pragma once

// Splitting P_{n,2k} into the SO(n)-irreducible levels r^{2k-2d} H_{n,2d}, and
// the per-level ratio of the gradient metric to the integral metric.

#include <cstdint>
#include <map>
#include <vector>

#include "conelab/poly.hpp"

namespace conelab {

template <class T>
struct HarmonicDecomposition {
  int n = 0;
  int two_k = 0;
  std::map<int, Form<T>> components;  // d -> harmonic h_{2d}

  // sum_d r^{2k-2d} h_{2d}
  Form<T> reconstruct() const;
  // r^{2k-2d} h_{2d}, the piece of f living on level d.
  Form<T> level(int d) const;
};

// Repeatedly solves Laplacian(r^2 g) = Laplacian(f) for g of degree m-2 against
// a cached exact inverse; h_m = f - r^2 g is harmonic, then recurse on g.
template <class T>
HarmonicDecomposition<T> harmonic_decompose(const Form<T>& f);

// d -> dim H_{n,2d} for 0 <= d <= k.
std::vector<std::int64_t> harmonic_dims(int n, int two_k);

// (2k^2 + d(n-2) + 2d^2) / (2k^2)
Rational metric_ratio_formula(int n, int k, int d);

struct MetricRatioRow {
  int d = 0;
  std::int64_t dimension = 0;
  Rational formula;
  Rational exact;        // measured on a random integer element, exact arithmetic
  double numeric = 0.0;  // measured on a Gaussian element in double
};

std::vector<MetricRatioRow> metric_ratio_table(int n, int k, std::uint64_t seed = 1);

// (Vol B_M / Vol B_G)^{1/D_M} = (prod_{d>=1} ratio_d^{dim_d})^{1/(2 D_M)}.
double gradient_ball_volume_ratio(int n, int k);

// Exact test of gradient_ball_volume_ratio(n,k) >= sqrt((4k^2+n-2)/(2k^2)),
// i.e. prod ratio_d^{dim_d} >= ((4k^2+n-2)/(2k^2))^{D_M}.
bool gradient_ball_bound_holds(int n, int k);

}  // namespace conelab

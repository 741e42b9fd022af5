#pragma once

// Monte Carlo over the unit sphere S_M of M: normalized volumes through the
// polar-coordinate formula (Vol K / Vol B_M)^{1/D_M} = (E G^{-D_M})^{1/D_M},
// average norms, the explicit bound windows, slope fits and the
// Santalo / Rogers-Shephard checks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conelab/cones.hpp"
#include "conelab/poly.hpp"
#include "conelab/rng.hpp"

namespace conelab {

// Bodies in M: the three cone sections, the unit balls of the integral and
// sup norms, the sq-norm ball, and the polar of Sq~ (gauge = support_sos).
enum class Body { Nonneg, Sos, LinPowers, L2Ball, LinfBall, SqBall, SosPolar };

std::string to_string(Body body);
Body parse_body(const std::string& name);

// Gaussian coordinates in an integral-orthonormal basis of M, normalized.
FormD sample_uniform_SM(int n, int two_k, Rng& rng);

struct GaugeSample {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool undecided = false;
};

using GaugeFn = std::function<GaugeSample(const FormD&)>;

struct GaugeSettings {
  double sos_tol = 1e-7;
  LinPowersOptions linpowers;
  SphereSearchOptions sphere;
};

GaugeFn body_gauge(Body body, const GaugeSettings& settings = {});

struct Interval {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct VolumeOptions {
  int bootstrap = 1000;
  int threads = 0;  // 0: hardware concurrency
};

struct VolumeEstimate {
  std::string body;
  int n = 0;
  int two_k = 0;
  int samples = 0;
  std::int64_t dimension = 0;  // D_M
  double value = 0.0;          // from per-sample gauge values
  double ci_low = 0.0;
  double ci_high = 0.0;
  Interval shrunk;   // every gauge at its upper end (smallest volume)
  Interval grown;    // every gauge at its lower end (largest volume)
  Interval jensen;   // (E G)^{-1}
  double tail_share = 0.0;  // largest single-sample share of sum G^{-D_M}
  int undecided = 0;
  double gauge_mean = 0.0;
  double gauge_min = 0.0;
  double gauge_max = 0.0;
  double gauge_sd = 0.0;
};

// Per-sample forms come from make_rng(seed, i), so the result does not depend
// on the thread count.
std::vector<GaugeSample> sample_gauges(const GaugeFn& gauge, int n, int two_k, int samples, std::uint64_t seed,
                                       int threads = 0);

VolumeEstimate volume_from_gauges(const std::vector<GaugeSample>& gauges, int n, int two_k, std::uint64_t seed,
                                  int bootstrap = 1000);

VolumeEstimate normalized_volume(const GaugeFn& gauge, int n, int two_k, int samples, std::uint64_t seed,
                                 const VolumeOptions& options = {});

struct AverageEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int samples = 0;
};

using NormFn = std::function<double(const FormD&)>;

AverageEstimate average_norm(const NormFn& norm, int n, int two_k, int samples, std::uint64_t seed,
                             const VolumeOptions& options = {});

struct BoundRow {
  std::string body;
  double lower = 0.0;
  double upper = 0.0;
};

struct BoundTable {
  int n = 0;
  int two_k = 0;
  BoundRow nonneg;
  BoundRow sos;
  BoundRow linpowers;
  Rational c;
  std::int64_t dim_M = 0;
  std::int64_t dim_H = 0;
  Rational alpha;
  double linf_average_bound = 0.0;  // 2 sqrt(2n(2k+1))
  double sq_average_bound = 0.0;    // 4^{2k}(2k)! sqrt(24) n^{-k/2} / k!
};

BoundTable bound_table(int n, int two_k);
const BoundRow& bound_row(const BoundTable& table, Body body);

struct SlopePoint {
  int n = 0;
  VolumeEstimate estimate;
  bool in_window = false;
  bool excluded = false;
};

struct SlopeFit {
  std::string body;
  int k = 0;
  std::vector<SlopePoint> points;
  double slope = 0.0;
  double standard_error = 0.0;
};

SlopeFit slope_experiment(Body body, int k, int n_min, int n_max, int samples, std::uint64_t seed,
                          const GaugeSettings& settings = {}, const VolumeOptions& options = {});

// Window membership used everywhere: the lower bound is compared against the
// shrunk estimate's upper CI end, the upper bound against the grown
// estimate's lower CI end.
bool volume_in_window(const VolumeEstimate& est, const BoundRow& row);

struct PolarityChecks {
  int n = 0;
  int two_k = 0;
  int samples = 0;
  Interval santalo_product;  // (Vol Sq~ Vol Sq~polar / Vol B_M^2)^{1/D_M}
  Interval rogers_shephard;  // (Vol B_inf / Vol C~)^{1/D_M}
  bool santalo_ok = false;   // CI low <= 1
  bool rogers_shephard_ok = false;  // CI high >= 1/4
};

PolarityChecks santalo_and_rogers_shephard_checks(int n, int two_k, int samples, std::uint64_t seed,
                                                  const GaugeSettings& settings = {},
                                                  const VolumeOptions& options = {});

// Exact statistic behind the estimators: log of (mean x_i^{-D})^{1/D}.
double log_power_mean_inverse(const std::vector<double>& log_values, double D);

}  // namespace conelab

#pragma once

// Gauges of the cone sections C~ (nonnegative), Sq~ (sums of squares) and
// Lf~ (sums of 2k-th powers of linear forms) inside M, SOS feasibility with
// certificates, and the catalecticant-based norms and support functions.
//
// Gauge of a section K~ at f in M: the least t > 0 with f + t r^{2k} in K.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conelab/poly.hpp"
#include "conelab/sphere_opt.hpp"

namespace conelab {

enum class GaugeMethod {
  SphereMin,        // |min f| on the sphere
  SdpBarrier,       // max lambda_min over the Gram affine set, two-sided bounds
  SdpBisection,     // bisection on sos_feasible
  GridLp,           // LP over powers v^{2k} at grid points (upper) plus dual witnesses (lower)
  DualCertificate,  // lower bound from certified nonnegative witnesses only
  Eigen             // an eigenvalue of a catalecticant
};

std::string to_string(GaugeMethod method);

struct GaugeResult {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  GaugeMethod method = GaugeMethod::SphereMin;
  std::vector<double> point;    // sphere minimizer
  Eigen::MatrixXd gram;         // Gram matrix of f + upper r^{2k} over the integral ONB of P_{n,k}
  std::vector<double> weights;  // grid LP weights
  std::optional<FormD> witness; // dual witness form
  int undecided = 0;            // undecided feasibility calls folded into the bracket
  std::string note;
};

struct SphereMinimum {
  double value = 0.0;
  std::vector<double> point;
};

// Desk-scale limit: n <= 8.
SphereMinimum min_on_sphere(const FormD& f, const SphereSearchOptions& options = {});

// Throws std::invalid_argument when the sphere integral of f is not zero
// (relative 1e-10).
void require_mean_zero(const FormD& f, const char* who);

GaugeResult gauge_nonneg(const FormD& f, const SphereSearchOptions& options = {});

enum class SosStatus { Feasible, Infeasible, Undecided };
std::string to_string(SosStatus status);

struct SosCertificate {
  Eigen::MatrixXd gram;      // over the integral ONB of P_{n,k}
  double residual = 0.0;     // |A(Q) - f| / max(1, |f|), integral norm
  double min_eigenvalue = 0.0;
};

struct SosFeasibility {
  SosStatus status = SosStatus::Undecided;
  std::string stage;                // "trivial", "dykstra" or "barrier"
  int iterations = 0;
  SosCertificate certificate;       // meaningful when Feasible
  std::optional<FormD> witness;     // g with H_g PSD and <g, f> < 0 when Infeasible
  double witness_pairing = 0.0;     // <g, f> for the normalized witness
  double lambda_lower = 0.0;        // bracket on max lambda_min, for f normalized to |f|_2 = 1
  double lambda_upper = 0.0;
};

// Dykstra alternating projections first; if they stall at the iteration cap
// the log-barrier solver decides with a certificate either way, or reports
// undecided.
SosFeasibility sos_feasible(const FormD& f, double tol = 1e-8, int max_iterations = 5000);

// Two-sided: lower from the dual witness, upper from a primal Gram matrix.
GaugeResult gauge_sos(const FormD& f, double tol = 1e-7);

// Bisection on t for sos_feasible(f / t + r^{2k}); slower cross-check.
GaugeResult gauge_sos_bisection(const FormD& f, double tol = 1e-4);

// Integral catalecticant: sq_norm is its spectral norm, support_sos its top
// eigenvalue.
double sq_norm(const FormD& f);
double support_sos(const FormD& f);

// Apolar catalecticant PSD (min eigenvalue >= -1e-10).
bool dual_sos_membership(const FormD& f);

struct LinPowersOptions {
  int grid_points = 2000;
  bool refine = false;      // double the grid until the bracket stabilizes
  int max_points = 8192;
  double tol = 1e-8;
  std::uint64_t seed = 0x11f0ULL;
  SphereSearchOptions sphere;
};

// Upper bound from the LP  min t  s.t.  f + t r^{2k} = sum_i w_i v_i^{2k},  w >= 0.
// Infeasible grids give +infinity.
GaugeResult gauge_linpowers_upper(const FormD& f, const std::vector<Eigen::VectorXd>& grid, double tol = 1e-8);

// max over witnesses g (certified nonnegative, positive integral) of
// c max(0, -<f, g>_d) / ((2k)! integral g). Uncertified witnesses throw.
GaugeResult gauge_linpowers_lower(const FormD& f, const std::vector<FormD>& witnesses,
                                  const SphereSearchOptions& options = {});

// The best lower bound over all squares p^2: c / (2k)! times the top
// eigenvalue of -K, K_ij = <f, b_i b_j>_d over an integral ONB of P_{n,k}.
double linpowers_square_bound(const FormD& f);

// Bracket [lower, upper] with value the midpoint. The lower end combines the
// point-power witnesses (|min f|), the best square, and the LP dual solution
// lifted to a nonnegative form.
GaugeResult gauge_linpowers(const FormD& f, const LinPowersOptions& options = {});

}  // namespace conelab

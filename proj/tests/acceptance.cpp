// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and sample
// counts are pinned here. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "conelab/apolarity.hpp"
#include "conelab/cones.hpp"
#include "conelab/harmonic.hpp"
#include "conelab/metrics.hpp"
#include "conelab/polyio.hpp"
#include "conelab/volume.hpp"

using namespace conelab;
namespace fs = std::filesystem;

namespace {

constexpr double kSpectrumTol = 1e-10;
constexpr double kGammaTol = 1e-12;
constexpr double kKelloggTol = 1e-3;
constexpr double kOrderingSlack = 1e-9;
constexpr double kSosTol = 1e-8;
constexpr double kProjectionTol = 1e-9;
constexpr double kSeMargin = 3.0;
constexpr double kGaugeTol = 1e-7;
constexpr std::uint64_t kSeed = 20240917;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds, double budget) {
  const bool in_time = seconds <= budget;
  const bool ok = pass && in_time;
  if (!ok) ++failures;
  std::ostringstream line;
  line.precision(4);
  line << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " [" << seconds << " s of " << budget
       << " s]";
  if (!in_time) line << " over time budget;";
  line << " " << detail;
  std::cout << line.str() << std::endl;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

FormD shift_to_dual_sos(FormD f, double r_min) {
  const int n = f.n(), k = f.degree() / 2;
  const double m =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(catalecticant(f, MetricKind::Apolar).matrix).eigenvalues()[0];
  if (m < 0) f += (-m / r_min) * (1 + 1e-9) * r_power<double>(n, k);
  return f;
}

// ---------------------------------------------------------------- 1
void criterion1() {
  Timer t;
  bool ok = true;
  std::string bad;
  for (auto [n, d] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 2}, std::pair{3, 4}, std::pair{4, 4}}) {
    const int k = d / 2;
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(d) + ")";
    auto fail = [&](const std::string& what) {
      ok = false;
      bad += " " + what + tag;
    };
    if (metric_switch_residual(n, d) != 0) fail("metric-switch");
    for (const auto& row : metric_ratio_table(n, k, kSeed))
      if (row.exact != row.formula || row.formula != Rational(2 * k * k + row.d * (n - 2) + 2 * row.d * row.d, 2 * k * k))
        fail("metric-ratio");
    const auto levels = t_spectrum(n, d);
    if (std::abs(to_double(levels.front().eigenvalue) - 1.0) > kSpectrumTol) fail("spectrum-d0");
    if (std::abs(to_double(levels.back().eigenvalue) - top_contraction_numeric(n, k)) > kSpectrumTol) fail("spectrum-dk");
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[0] = d;
    const Rational c = sphere_moment(ExponentVector(e));
    if (c != c_gamma_exact(n, k) || c != t_matrix(n, d).c) fail("c-exact");
    if (std::abs(c_gamma_numeric(n, k) - to_double(c)) > kGammaTol * to_double(c)) fail("c-gamma");
    const std::int64_t dm = dim_mean_zero(n, d), dh = harmonic_dims(n, d).back();
    if (dm != binomial_int(n + d - 1, d) - 1) fail("D_M");
    if (dh != binomial_int(n + d - 1, d) - binomial_int(n + d - 3, d - 2)) fail("D_H");
    const Rational q(d - 1, n + d - 2);
    if (Rational(dh, dm) < Rational(1) - q * q)
      fail("D_H/D_M=" + to_string(Rational(dh, dm)) + "<" + to_string(Rational(1) - q * q) + "@");
  }
  report(1, "exact identity suite", ok, ok ? "all identities exact" : "failed:" + bad, t.seconds(), 30);
}

// ---------------------------------------------------------------- 2
void criterion2() {
  Timer t;
  Rng rng = make_rng(kSeed, 2);
  double worst_kellogg = 0, worst_barvinok = -1e300, worst_order = -1e300;
  const double factor = barvinok_factor(3, 4);
  for (int i = 0; i < 100; ++i) {
    const FormD f = gaussian_form(3, 4, rng);
    const double linf = linf_norm(f);
    worst_kellogg = std::max(worst_kellogg, std::abs(max_gradient_square(f) / (16.0 * linf * linf) - 1.0));
    worst_barvinok = std::max(worst_barvinok, linf / (factor * lp_norm(f, 6).value));
    worst_order = std::max(worst_order, gradient_norm(f) - linf);
  }
  const bool ok = worst_kellogg <= kKelloggTol && worst_barvinok <= 1.0 && worst_order <= kOrderingSlack;
  report(2, "Kellogg / Barvinok property suite at (3,4), 100 forms", ok,
         "max Kellogg deviation " + fmt(worst_kellogg) + ", max |f|_inf / Barvinok bound " + fmt(worst_barvinok) +
             ", max |f|_G - |f|_inf " + fmt(worst_order),
         t.seconds(), 300);
}

// ---------------------------------------------------------------- 3
void criterion3() {
  Timer t;
  Rng rng = make_rng(kSeed, 3);
  const double r_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                           catalecticant(r_power<double>(3, 2), MetricKind::Apolar).matrix)
                           .eigenvalues()[0];
  int counterexamples = 0;
  for (int i = 0; i < 200; ++i) {
    const FormD f = shift_to_dual_sos(gaussian_form(3, 4, rng), r_min);
    if (!dual_sos_membership(f) || sos_feasible(f, kSosTol).status != SosStatus::Feasible) ++counterexamples;
  }
  double worst = 0;
  for (int i = 0; i < 20; ++i) worst = std::max(worst, projection_identity_residual(gaussian_form(3, 2, rng)));
  const bool ok = counterexamples == 0 && worst <= kProjectionTol;
  report(3, "dual SOS inclusion and projection identity", ok,
         std::to_string(counterexamples) + " counterexamples in 200, max projection residual " + fmt(worst), t.seconds(),
         600);
}

// ---------------------------------------------------------------- 4
void criterion4() {
  Timer t;
  bool ok = true;
  std::string detail;
  for (int n : {3, 4}) {
    const BoundTable bt = bound_table(n, 4);
    const AverageEstimate linf = average_norm([](const FormD& f) { return linf_norm(f); }, n, 4, 10000, derive_seed(kSeed, 40 + n));
    const AverageEstimate sq = average_norm([](const FormD& f) { return sq_norm(f); }, n, 4, 10000, derive_seed(kSeed, 50 + n));
    ok = ok && linf.mean + kSeMargin * linf.standard_error <= bt.linf_average_bound &&
         sq.mean + kSeMargin * sq.standard_error <= bt.sq_average_bound;
    detail += "n=" + std::to_string(n) + ": E|f|_inf " + fmt(linf.mean) + " <= " + fmt(bt.linf_average_bound) + ", E|f|_sq " +
              fmt(sq.mean) + " <= " + fmt(bt.sq_average_bound) + "; ";
  }
  report(4, "average sup and sq norm bounds, 10^4 samples", ok, detail, t.seconds(), 600);
}

// ---------------------------------------------------------------- 5
void criterion5() {
  Timer t;
  bool ok = true;
  std::string detail;
  for (int n : {3, 4}) {
    const BoundTable bt = bound_table(n, 4);
    const std::uint64_t seed = derive_seed(kSeed, 500 + n);
    const VolumeEstimate c = normalized_volume(body_gauge(Body::Nonneg), n, 4, 20000, seed);
    const VolumeEstimate s = normalized_volume(body_gauge(Body::Sos), n, 4, 2000, seed);
    const VolumeEstimate l = normalized_volume(body_gauge(Body::LinPowers), n, 4, 1000, seed);
    const bool c_in = volume_in_window(c, bt.nonneg);
    const bool s_in = volume_in_window(s, bt.sos);
    const bool l_meets = l.shrunk.ci_low <= bt.linpowers.upper && l.grown.ci_high >= bt.linpowers.lower;
    const bool nested = c.ci_high >= s.ci_low && s.grown.ci_high >= l.shrunk.ci_low;
    ok = ok && c_in && s_in && l_meets && nested;
    detail += "n=" + std::to_string(n) + ": C " + fmt(c.value) + (c_in ? " in" : " OUT") + ", Sq " + fmt(s.value) +
              (s_in ? " in" : " OUT") + ", Lf [" + fmt(l.shrunk.value) + ", " + fmt(l.grown.value) + "]" +
              (l_meets ? " meets" : " MISSES") + (nested ? ", nested; " : ", NOT nested; ");
  }
  report(5, "volume windows and nesting at (3,4), (4,4), default sample counts", ok, detail, t.seconds(), 3600);
}

// ---------------------------------------------------------------- 6
void criterion6() {
  Timer t;
  struct Case {
    Body body;
    int n_max, samples;
    double expected, width;
  };
  bool ok = true;
  std::string detail;
  for (const Case& cs : {Case{Body::Nonneg, 8, 1000, -0.5, 0.35}, Case{Body::Sos, 6, 400, -1.0, 0.4},
                         Case{Body::LinPowers, 6, 200, -1.5, 0.5}}) {
    const SlopeFit fit = slope_experiment(cs.body, 2, 3, cs.n_max, cs.samples, derive_seed(kSeed, 600));
    const bool in = std::abs(fit.slope - cs.expected) <= cs.width;
    ok = ok && in;
    detail += fit.body + " slope " + fmt(fit.slope) + " (expect " + fmt(cs.expected) + " +- " + fmt(cs.width) + ")" +
              (in ? "; " : " OUT; ");
  }
  report(6, "log-log slopes, k=2 (samples per n: C 1000, Sq 400, Lf 200)", ok, detail, t.seconds(), 7200);
}

// ---------------------------------------------------------------- 7
void criterion7() {
  Timer t;
  const PolarityChecks pc = santalo_and_rogers_shephard_checks(3, 4, 2000, derive_seed(kSeed, 7));
  std::string failing;
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= 3; ++k)
      if (!gradient_ball_bound_holds(n, k)) failing += " (" + std::to_string(n) + "," + std::to_string(k) + ")";
  const bool ok = pc.santalo_ok && pc.rogers_shephard_ok && failing.empty();
  report(7, "Santalo / Rogers-Shephard / gradient-ball checks", ok,
         "Santalo product " + fmt(pc.santalo_product.value) + " (ci_low " + fmt(pc.santalo_product.ci_low) +
             " <= 1), B_inf/C ratio " + fmt(pc.rogers_shephard.value) + " (>= 1/4); gradient-ball bound " +
             (failing.empty() ? "holds" : "fails at (n,k)" + failing),
         t.seconds(), 1800);
}

// ---------------------------------------------------------------- 8
void criterion8() {
  Timer t;
  double worst = 0, worst_quadratic = 0, widest_bracket = 0;
  for (auto [n, d] : {std::pair{3, 4}, std::pair{2, 4}}) {
    for (int i = 0; i < 50; ++i) {
      Rng sample = make_rng(derive_seed(kSeed, 80 + n), static_cast<std::uint64_t>(i));
      const FormD f = sample_uniform_SM(n, d, sample);
      worst = std::max(worst, std::abs(gauge_sos(f, kGaugeTol).value - gauge_nonneg(f).value));
    }
  }
  for (int n = 2; n <= 4; ++n) {
    for (int i = 0; i < 10; ++i) {
      Rng sample = make_rng(derive_seed(kSeed, 88 + n), static_cast<std::uint64_t>(i));
      const FormD f = sample_uniform_SM(n, 2, sample);
      const double c = gauge_nonneg(f).value;
      const GaugeResult l = gauge_linpowers(f);
      double dev = std::abs(gauge_sos(f, kGaugeTol).value - c);
      dev = std::max(dev, std::abs(l.lower - c));
      if (l.upper < c - kGaugeTol) dev = std::max(dev, c - l.upper);
      worst_quadratic = std::max(worst_quadratic, dev);
      widest_bracket = std::max(widest_bracket, l.upper - l.lower);
    }
  }
  const bool ok = worst <= 2 * kGaugeTol && worst_quadratic <= kGaugeTol;
  report(8, "equality cases: sos = nonneg at (3,4), (2,4); quadratics", ok,
         "max |sos - nonneg| " + fmt(worst) + " (<= " + fmt(2 * kGaugeTol) + "), quadratic max deviation " +
             fmt(worst_quadratic) + ", widest linpowers grid bracket " + fmt(widest_bracket),
         t.seconds(), 1800);
}

// ---------------------------------------------------------------- 9
int sh(const std::string& cmd) { return std::system(cmd.c_str()); }

void criterion9(const std::string& cli) {
  Timer t;
  const fs::path dir = fs::temp_directory_path() / ("conelab_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  write_file_atomic(dir / "f.json",
                    R"({"n": 3, "degree": 4, "terms": [[[4,0,0], "4/5"], [[0,4,0], "-1/5"], [[0,0,4], "-1/5"], [[2,2,0], "-2/5"], [[2,0,2], "-2/5"], [[0,2,2], "-2/5"]]})");
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"verify", "verify --n 3 --deg 4"},
      {"bounds", "bounds --n 4 --deg 4"},
      {"gauge", "gauge --cone sos --input " + (dir / "f.json").string()},
      {"volume", "volume --cone nonneg --n 3 --deg 4 --samples 500 --seed 7"},
      {"volume-sos", "volume --cone sos --n 3 --deg 4 --samples 100 --seed 8"},
      {"polarity", "experiment polarity --n 3 --deg 4 --samples 100"},
      {"slopes", "experiment slopes --cone nonneg --k 1 --n-min 2 --n-max 4 --samples 100"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, args] : runs) {
    const std::string first = (dir / (name + ".json")).string();
    const std::string second = (dir / (name + ".rerun.json")).string();
    const std::string sub = args.substr(0, args.find(' '));
    const int a = sh(cli + " " + args + " --threads 1 --out " + first + " 2>/dev/null");
    const int b = sh(cli + " " + sub + " --config " + first + " --threads 2 --out " + second + " 2>/dev/null");
    const bool same = fs::exists(first) && fs::exists(second) && read_file(first) == read_file(second) && a == b;
    ok = ok && same;
    detail += name + (same ? " identical; " : " DIFFERS; ");
  }
  fs::remove_all(dir);
  report(9, "report re-run from embedded config is byte-identical", ok, detail, t.seconds(), 600);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = CONELAB_CLI_PATH;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--cli=", 0) == 0)
      cli = a.substr(6);
    else
      only.push_back(std::atoi(a.c_str()));
  }
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  if (want(1)) criterion1();
  if (want(2)) criterion2();
  if (want(3)) criterion3();
  if (want(4)) criterion4();
  if (want(5)) criterion5();
  if (want(6)) criterion6();
  if (want(7)) criterion7();
  if (want(8)) criterion8();
  if (want(9)) criterion9(cli);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

#include "conelab/report.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "conelab/apolarity.hpp"
#include "conelab/cones.hpp"
#include "conelab/errors.hpp"
#include "conelab/harmonic.hpp"
#include "conelab/metrics.hpp"
#include "conelab/polyio.hpp"
#include "conelab/sdp.hpp"
#include "conelab/volume.hpp"

namespace conelab {

// ------------------------------------------------------------------ config

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  if (command == "experiment") j["experiment"] = experiment;
  j["n"] = n;
  j["degree"] = degree;
  j["cone"] = cone;
  j["samples"] = effective_samples();
  j["seed"] = seed;
  j["tol"] = tol;
  j["grid"] = grid;
  j["mode"] = mode;
  j["n_min"] = n_min;
  j["n_max"] = n_max;
  j["bootstrap"] = bootstrap;
  if (input_form) j["input_form"] = Json::parse(*input_form);
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    if (j.contains("experiment")) c.experiment = j.at("experiment").get<std::string>();
    c.n = j.at("n").get<int>();
    c.degree = j.at("degree").get<int>();
    c.cone = j.at("cone").get<std::string>();
    c.samples = j.at("samples").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.tol = j.at("tol").get<double>();
    c.grid = j.at("grid").get<int>();
    c.mode = j.at("mode").get<std::string>();
    c.n_min = j.at("n_min").get<int>();
    c.n_max = j.at("n_max").get<int>();
    c.bootstrap = j.at("bootstrap").get<int>();
    if (j.contains("input_form")) c.input_form = j.at("input_form").dump();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report config: ") + e.what());
  }
  return c;
}

namespace {

bool is_cone_name(const std::string& s) {
  try {
    parse_body(s);
    return true;
  } catch (const UsageError&) {
    return false;
  }
}

bool needs_gram(const std::string& cone) { return cone == "sos" || cone == "sos-polar" || cone == "sq-ball"; }

void check_supported(const std::string& cone, int n, int degree) {
  const int k = degree / 2;
  if (n > 8) throw UnsupportedError("n = " + std::to_string(n) + " is beyond the supported range (n <= 8)");
  if (degree > 8) throw UnsupportedError("degree " + std::to_string(degree) + " is beyond the supported range (<= 8)");
  if (needs_gram(cone) && dim_forms(n, k) > 28)
    throw UnsupportedError("cone " + cone + " needs Gram matrices of size D_{n,k} <= 28");
  if (cone == "linpowers" && dim_forms(n, degree) > 210)
    throw UnsupportedError("cone linpowers needs dim P_{n,2k} <= 210");
}

}  // namespace

void RunConfig::validate() const {
  static const char* commands[] = {"verify", "gauge", "volume", "bounds", "experiment"};
  if (std::find(std::begin(commands), std::end(commands), command) == std::end(commands))
    throw UsageError("unknown command '" + command + "'");
  if (n < 2) throw UsageError("--n must be at least 2");
  if (degree < 2 || degree % 2 != 0) throw UsageError("--deg must be an even integer >= 2");
  if (!is_cone_name(cone)) throw UsageError("unknown cone '" + cone + "'");
  if (samples < 0) throw UsageError("--samples must be positive");
  if (!(tol > 0.0) || tol >= 1.0) throw UsageError("--tol must lie in (0, 1)");
  if (grid < 50) throw UsageError("--grid must be at least 50");
  if (mode != "exact" && mode != "numeric") throw UsageError("--mode must be exact or numeric");
  if (bootstrap < 0) throw UsageError("--bootstrap must be nonnegative");
  if (command == "gauge" && !input_form) throw UsageError("gauge needs --input");
  if (command == "experiment") {
    if (experiment != "slopes" && experiment != "polarity" && experiment != "averages")
      throw UsageError("experiment must be slopes, polarity or averages");
    if (experiment == "slopes") {
      if (n_min < 2 || n_max < n_min) throw UsageError("need 2 <= --n-min <= --n-max");
      check_supported(cone, n_max, degree);
      return;
    }
    if (experiment == "polarity") {
      check_supported("sos", n, degree);
      return;
    }
    check_supported("sq-ball", n, degree);
    return;
  }
  if (command == "verify") {
    if (dim_forms(n, degree) > 126) throw UnsupportedError("verify needs dim P_{n,2k} <= 126");
    return;
  }
  if (command == "bounds") return;
  check_supported(cone, n, degree);
}

int RunConfig::effective_samples() const {
  if (samples > 0) return samples;
  if (command == "experiment" && experiment == "averages") return 10000;
  if (command == "experiment" && experiment == "polarity") return 2000;
  if (cone == "nonneg" || cone == "l2-ball") return 20000;
  if (cone == "linpowers") return 1000;
  return 2000;
}

std::string Report::text() const { return document.dump(2) + "\n"; }

// ------------------------------------------------------------------ helpers

namespace {

struct Checks {
  Json list = Json::array();
  std::string first_failure;
  bool failed = false;

  void add(const std::string& name, const std::string& anchor, Json value, Json target, bool pass,
           bool counts = true) {
    Json c;
    c["name"] = name;
    c["anchor"] = anchor;
    c["value"] = std::move(value);
    c["target"] = std::move(target);
    c["pass"] = pass;
    c["counts_toward_exit"] = counts;
    list.push_back(std::move(c));
    if (!pass && counts && !failed) {
      failed = true;
      first_failure = name;
    }
  }
};

Json rational_json(const Rational& q) {
  Json j;
  j["exact"] = to_string(q);
  j["approx"] = to_double(q);
  return j;
}

Json interval_json(const Interval& i) {
  Json j;
  j["value"] = i.value;
  j["ci_low"] = i.ci_low;
  j["ci_high"] = i.ci_high;
  return j;
}

Json estimate_json(const VolumeEstimate& e) {
  Json j;
  j["body"] = e.body;
  j["n"] = e.n;
  j["degree"] = e.two_k;
  j["samples"] = e.samples;
  j["dimension"] = e.dimension;
  j["value"] = e.value;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["shrunk"] = interval_json(e.shrunk);
  j["grown"] = interval_json(e.grown);
  j["jensen"] = interval_json(e.jensen);
  j["tail_share"] = e.tail_share;
  j["undecided"] = e.undecided;
  j["gauge"] = {{"mean", e.gauge_mean}, {"sd", e.gauge_sd}, {"min", e.gauge_min}, {"max", e.gauge_max}};
  return j;
}

Json bound_row_json(const BoundRow& r) { return Json{{"body", r.body}, {"lower", r.lower}, {"upper", r.upper}}; }

Json form_json(const FormD& f) { return Json::parse(write_form_text(f)); }

Report finish(const RunConfig& config, Json result, Checks checks, int exit_code) {
  Report r;
  Json& d = r.document;
  d["schema"] = kReportSchema;
  d["command"] = config.command;
  d["config"] = config.to_json();
  d["result"] = std::move(result);
  d["checks"] = std::move(checks.list);
  if (exit_code == kExitOk && checks.failed) exit_code = kExitViolation;
  d["status"] = exit_code == kExitOk ? "ok" : exit_code == kExitViolation ? "violation" : "undecided";
  if (checks.failed) d["first_failure"] = checks.first_failure;
  d["exit_code"] = exit_code;
  r.exit_code = exit_code;
  return r;
}

GaugeSettings settings_of(const RunConfig& c) {
  GaugeSettings s;
  s.sos_tol = c.tol;
  s.linpowers.grid_points = c.grid;
  s.linpowers.seed = derive_seed(c.seed, 0x9a1dULL);
  return s;
}

VolumeOptions volume_options(const RunConfig& c) {
  VolumeOptions o;
  o.bootstrap = c.bootstrap;
  o.threads = c.threads;
  return o;
}

FormQ random_integer_form(int n, int degree, Rng& rng) {
  std::uniform_int_distribution<int> small(-3, 3);
  FormQ f(n, degree);
  for (int i = 0; i < f.size(); ++i) f[i] = Rational(small(rng));
  return f;
}

}  // namespace

// ------------------------------------------------------------------ verify

Report cmd_verify(const RunConfig& config) {
  const int n = config.n;
  const int two_k = config.degree;
  const int k = two_k / 2;
  const bool exact = config.mode == "exact";
  Checks checks;
  Json result;

  // Metric switch: <T e_i, e_j>_d = (2k)! <e_i, e_j>.
  const Rational switch_res = metric_switch_residual(n, two_k);
  checks.add("metric-switch identity", "T switches integral and apolar metrics", rational_json(switch_res), 0,
             switch_res == 0);

  // The constant c three ways.
  const OperatorMatrix& op = t_matrix(n, two_k);
  const Rational c_gamma = c_gamma_exact(n, k);
  const double c_num = c_gamma_numeric(n, k);
  result["c"] = {{"sphere_moment", rational_json(op.c)}, {"gamma_exact", rational_json(c_gamma)}, {"gamma_numeric", c_num}};
  checks.add("c equals the Gamma formula", "T(r^2k) = c r^2k", rational_json(op.c), rational_json(c_gamma),
             op.c == c_gamma && std::abs(c_num - to_double(op.c)) <= 1e-12 * to_double(op.c));

  // Spectrum of (1/c) T on the harmonic levels.
  Json spectrum = Json::array();
  const auto rows = t_spectrum(n, two_k);
  bool spectrum_ok = true;
  for (const auto& r : rows) {
    spectrum.push_back({{"d", r.d}, {"eigenvalue", rational_json(r.eigenvalue)}, {"off_level_residual", r.off_level_residual},
                        {"second_representative_agrees", r.second_agrees}});
    spectrum_ok = spectrum_ok && r.off_level_residual <= 1e-10 && r.second_agrees && r.eigenvalue > 0 && r.eigenvalue <= 1;
  }
  result["t_spectrum"] = spectrum;
  checks.add("spectrum is scalar on each level", "(1/c)T on r^{2k-2d} H_{2d}", spectrum_ok, true, spectrum_ok);
  checks.add("spectrum at d = 0", "(1/c)T fixes r^2k", rational_json(rows.front().eigenvalue), 1, rows.front().eigenvalue == 1);
  const Rational top = top_contraction_exact(n, k);
  const double top_num = top_contraction_numeric(n, k);
  checks.add("spectrum at d = k", "k! Gamma(k+n/2) / Gamma(2k+n/2)", rational_json(rows.back().eigenvalue),
             Json{{"exact", to_string(top)}, {"gamma_numeric", top_num}},
             rows.back().eigenvalue == top && std::abs(to_double(top) - top_num) <= 1e-10);
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].eigenvalue < rows[i - 1].eigenvalue;
  checks.add("spectrum decreasing in d (observed)", "measured, not asserted", decreasing, true, decreasing, false);

  // Metric ratios per level.
  Json ratios = Json::array();
  bool ratio_ok = true;
  for (const auto& r : metric_ratio_table(n, k, config.seed)) {
    const bool ok = exact ? (r.exact == r.formula) : std::abs(r.numeric - to_double(r.formula)) <= 1e-10 * to_double(r.formula);
    ratio_ok = ratio_ok && ok;
    ratios.push_back({{"d", r.d}, {"dimension", r.dimension}, {"formula", rational_json(r.formula)},
                      {"measured_exact", rational_json(r.exact)}, {"measured_numeric", r.numeric}});
  }
  result["metric_ratios"] = ratios;
  checks.add("gradient/integral ratio per level", "(2k^2 + d(n-2) + 2d^2) / (2k^2)", ratio_ok, true, ratio_ok);

  // Dimensions.
  const auto dims = harmonic_dims(n, two_k);
  std::int64_t total = 0;
  for (auto d : dims) total += d;
  const std::int64_t dm = dim_mean_zero(n, two_k);
  const std::int64_t dh = dims.back();
  const std::int64_t dh_formula = binomial_int(n + two_k - 1, two_k) - binomial_int(n + two_k - 3, two_k - 2);
  result["dimensions"] = {{"D_M", dm}, {"D_H", dh}, {"levels", dims}};
  checks.add("D_M", "binomial(n+2k-1, 2k) - 1", dm, binomial_int(n + two_k - 1, two_k) - 1,
             dm == binomial_int(n + two_k - 1, two_k) - 1 && total == dim_forms(n, two_k));
  checks.add("D_H", "binomial(n+2k-1,2k) - binomial(n+2k-3,2k-2)", dh, dh_formula, dh == dh_formula);
  const Rational ratio(dh, dm);
  const Rational q(two_k - 1, n + two_k - 2);
  const Rational floor_ratio = Rational(1) - q * q;
  // Claimed in the source but false for most (n, 2k) beyond the smallest
  // cases; reported, not part of the exit code.
  checks.add("D_H / D_M lower bound", "1 - ((2k-1)/(n+2k-2))^2", rational_json(ratio), rational_json(floor_ratio),
             ratio >= floor_ratio, false);

  // Harmonic decomposition of a random integer form.
  {
    Rng rng = make_rng(config.seed, 0xdec0ULL);
    const FormQ f = random_integer_form(n, two_k, rng);
    bool ok = true;
    if (exact) {
      const auto hd = harmonic_decompose(f);
      ok = hd.reconstruct() == f;
      for (const auto& [d, h] : hd.components) ok = ok && (h.degree() == 0 || laplacian(h).is_zero());
      for (const auto& [d1, h1] : hd.components)
        for (const auto& [d2, h2] : hd.components)
          if (d1 < d2) ok = ok && integral_ip(hd.level(d1), hd.level(d2)) == 0;
    } else {
      const auto hd = harmonic_decompose(to_numeric(f));
      const FormD diff = hd.reconstruct() - to_numeric(f);
      ok = integral_norm(diff) <= 1e-10 * std::max(1.0, integral_norm(to_numeric(f)));
      for (const auto& [d, h] : hd.components)
        if (h.degree() >= 2) ok = ok && integral_norm(laplacian(h)) <= 1e-10 * std::max(1.0, integral_norm(h));
    }
    checks.add("harmonic decomposition", "f = sum r^{2k-2d} h_2d, h_2d harmonic, levels orthogonal", ok, true, ok);
  }

  // Apolar reproducing property <v^{2k}, g>_d = (2k)! g(v).
  {
    Rng rng = make_rng(config.seed, 0xa901ULL);
    std::uniform_int_distribution<int> small(-3, 3);
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Rational> v(static_cast<std::size_t>(n));
      for (auto& x : v) x = Rational(small(rng));
      const FormQ g = random_integer_form(n, two_k, rng);
      const FormQ p = linear_form_power<Rational>(std::span<const Rational>(v), two_k);
      ok = ok && apolar_ip(p, g) == factorial(two_k) * evaluate<Rational>(g, std::span<const Rational>(v));
    }
    checks.add("apolar reproducing property", "<v^2k, g>_d = (2k)! g(v)", ok, true, ok);
  }

  // Projection identity on x1^k and Gaussian q.
  {
    Rng rng = make_rng(config.seed, 0x9e0ULL);
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[0] = k;
    double worst = projection_identity_residual(FormD::monomial(ExponentVector(e)));
    for (int trial = 0; trial < 5; ++trial) worst = std::max(worst, projection_identity_residual(gaussian_form(n, k, rng)));
    checks.add("projection identity", "P(A_q) = binomial(2k,k)^{-1} H_{q^2}", worst, 1e-9, worst <= 1e-9);
  }

  // Kellogg: max |grad f|^2 = (2k)^2 |f|_inf^2 on random forms.
  {
    Rng rng = make_rng(config.seed, 0x4e11ULL);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const FormD f = gaussian_form(n, two_k, rng);
      const double lhs = max_gradient_square(f);
      const double linf = linf_norm(f);
      worst = std::max(worst, std::abs(lhs / (two_k * two_k * linf * linf) - 1.0));
    }
    checks.add("Kellogg identity", "max |grad f|^2 = (2k)^2 |f|_inf^2", worst, 1e-3, worst <= 1e-3);
  }

  // Dual SOS inclusion on a few forms with PSD apolar catalecticant.
  if (dim_forms(n, k) <= 28) {
    Rng rng = make_rng(config.seed, 0x5051ULL);
    const Eigen::MatrixXd Hr = catalecticant(r_power<double>(n, k), MetricKind::Apolar).matrix;
    const double r_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hr).eigenvalues()[0];
    int passed = 0;
    for (int trial = 0; trial < 5; ++trial) {
      FormD f = gaussian_form(n, two_k, rng);
      const double fmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(catalecticant(f, MetricKind::Apolar).matrix).eigenvalues()[0];
      if (fmin < 0.0) f += (-fmin / r_min) * (1.0 + 1e-9) * r_power<double>(n, k);
      if (sos_feasible(f, 1e-8).status == SosStatus::Feasible) ++passed;
    }
    checks.add("dual SOS inclusion", "PSD apolar catalecticant implies sum of squares", passed, 5, passed == 5);
  }

  // Gradient-ball volume: reported, see README.
  {
    const double value = gradient_ball_volume_ratio(n, k);
    const double bound = std::sqrt((4.0 * k * k + n - 2.0) / (2.0 * k * k));
    const bool holds = gradient_ball_bound_holds(n, k);
    result["gradient_ball"] = {{"ratio", value}, {"claimed_lower_bound", bound}, {"holds_exactly", holds}};
    checks.add("gradient-ball volume ratio bound", "(Vol B_M / Vol B_G)^{1/D_M} >= sqrt((4k^2+n-2)/(2k^2))", value,
               bound, holds, false);
  }
  return finish(config, std::move(result), std::move(checks), kExitOk);
}

// ------------------------------------------------------------------ gauge

namespace {

FormD load_input(const RunConfig& config) {
  FormD f = read_form_numeric(*config.input_form);
  if (f.n() != config.n || f.degree() != config.degree)
    throw DimensionMismatchError("input form has n = " + std::to_string(f.n()) + ", degree " + std::to_string(f.degree()) +
                      " but the run asks for n = " + std::to_string(config.n) + ", degree " + std::to_string(config.degree));
  return f;
}

Json gauge_json(const GaugeResult& r, const GramMap* map) {
  Json j;
  j["value"] = r.value;
  j["lower"] = r.lower;
  j["upper"] = std::isfinite(r.upper) ? Json(r.upper) : Json("inf");
  j["method"] = to_string(r.method);
  Json cert;
  if (!r.point.empty()) cert["minimizer"] = r.point;
  if (r.gram.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.gram, Eigen::EigenvaluesOnly);
    cert["gram_min_eigenvalue"] = es.eigenvalues()[0];
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(r.gram.rows()));
    for (Eigen::Index i = 0; i < r.gram.rows(); ++i)
      for (Eigen::Index c = 0; c < r.gram.cols(); ++c) rows[static_cast<std::size_t>(i)].push_back(r.gram(i, c));
    cert["gram"] = rows;
    if (map) cert["gram_basis"] = "integral-orthonormal basis of P_{n,k} (Cholesky of the monomial Gram matrix)";
  }
  if (!r.weights.empty()) {
    int support = 0;
    for (double w : r.weights) support += w > 1e-12 ? 1 : 0;
    cert["lp_support_size"] = support;
  }
  if (r.witness) cert["witness"] = form_json(*r.witness);
  if (!cert.empty()) j["certificate"] = cert;
  if (r.undecided) j["undecided"] = r.undecided;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

Report cmd_gauge(const RunConfig& config) {
  const FormD f = load_input(config);
  Checks checks;
  const GaugeSettings settings = settings_of(config);
  const Body body = parse_body(config.cone);
  const double mean = sphere_integral(f);
  if (body == Body::Nonneg || body == Body::Sos || body == Body::LinPowers) {
    if (std::abs(mean) > 1e-10 * std::max(1.0, integral_norm(f)))
      throw FormatError("input form must have zero sphere integral (got " + std::to_string(mean) + ")");
  }
  GaugeResult r;
  const GramMap* map = nullptr;
  switch (body) {
    case Body::Nonneg: r = gauge_nonneg(f, settings.sphere); break;
    case Body::Sos:
      r = gauge_sos(f, config.tol);
      map = &gram_map(f.n(), f.degree() / 2);
      break;
    case Body::LinPowers: r = gauge_linpowers(f, settings.linpowers); break;
    default: {
      const double v = body_gauge(body, settings)(f).value;
      r.value = r.lower = r.upper = v;
      r.method = GaugeMethod::Eigen;
      if (body == Body::L2Ball) r.method = GaugeMethod::DualCertificate;
      if (body == Body::LinfBall) r.method = GaugeMethod::SphereMin;
    }
  }
  if (body == Body::L2Ball) r.method = GaugeMethod::Eigen;
  checks.add("bracket ordered", "lower <= value <= upper", Json::array({r.lower, r.value}), r.upper,
             r.lower <= r.value + config.tol && r.value <= r.upper + config.tol);
  const int code = (r.undecided > 0 || !std::isfinite(r.upper)) ? kExitUndecided : kExitOk;
  return finish(config, gauge_json(r, map), std::move(checks), code);
}

// ------------------------------------------------------------------ volume

Report cmd_volume(const RunConfig& config) {
  const Body body = parse_body(config.cone);
  const GaugeSettings settings = settings_of(config);
  VolumeEstimate est = normalized_volume(body_gauge(body, settings), config.n, config.degree, config.effective_samples(),
                                         config.seed, volume_options(config));
  est.body = config.cone;
  Checks checks;
  Json result;
  result["estimate"] = estimate_json(est);
  const double se = est.gauge_sd / std::sqrt(static_cast<double>(est.samples));
  checks.add("direct estimator above Jensen bound", "power-mean chain", est.value, est.jensen.value,
             est.value >= est.jensen.value - 2.0 * se);
  if (body == Body::Nonneg || body == Body::Sos || body == Body::LinPowers) {
    const BoundRow row = bound_row(bound_table(config.n, config.degree), body);
    result["window"] = bound_row_json(row);
    const bool in = volume_in_window(est, row);
    checks.add("volume inside proven window", "explicit volume bounds for " + config.cone,
               Json::array({est.shrunk.ci_high, est.grown.ci_low}), Json::array({row.lower, row.upper}), in,
               body != Body::LinPowers);
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "body,n,degree,samples,value,ci_low,ci_high,shrunk,grown,jensen,undecided\n";
  csv << config.cone << ',' << config.n << ',' << config.degree << ',' << est.samples << ',' << est.value << ','
      << est.ci_low << ',' << est.ci_high << ',' << est.shrunk.value << ',' << est.grown.value << ',' << est.jensen.value
      << ',' << est.undecided << '\n';
  const int code = 2 * est.undecided > est.samples ? kExitUndecided : kExitOk;
  Report rep = finish(config, std::move(result), std::move(checks), code);
  rep.csv = csv.str();
  return rep;
}

// ------------------------------------------------------------------ bounds

Report cmd_bounds(const RunConfig& config) {
  const BoundTable t = bound_table(config.n, config.degree);
  Json result;
  result["rows"] = Json::array({bound_row_json(t.nonneg), bound_row_json(t.sos), bound_row_json(t.linpowers)});
  result["c"] = rational_json(t.c);
  result["D_M"] = t.dim_M;
  result["D_H"] = t.dim_H;
  result["alpha"] = rational_json(t.alpha);
  result["average_linf_bound"] = t.linf_average_bound;
  result["average_sq_bound"] = t.sq_average_bound;
  Checks checks;
  for (const BoundRow* r : {&t.nonneg, &t.sos, &t.linpowers})
    checks.add("window nonempty: " + r->body, "lower < upper", r->lower, r->upper, r->lower < r->upper);
  std::ostringstream csv;
  csv.precision(17);
  csv << "body,n,degree,lower,upper\n";
  for (const BoundRow* r : {&t.nonneg, &t.sos, &t.linpowers})
    csv << r->body << ',' << config.n << ',' << config.degree << ',' << r->lower << ',' << r->upper << '\n';
  Report rep = finish(config, std::move(result), std::move(checks), kExitOk);
  rep.csv = csv.str();
  return rep;
}

// ------------------------------------------------------------------ experiment

Report cmd_experiment(const RunConfig& config) {
  const GaugeSettings settings = settings_of(config);
  const VolumeOptions options = volume_options(config);
  Checks checks;
  Json result;
  std::ostringstream csv;
  csv.precision(17);
  int code = kExitOk;

  if (config.experiment == "slopes") {
    const Body body = parse_body(config.cone);
    const int k = config.degree / 2;
    const SlopeFit fit = slope_experiment(body, k, config.n_min, config.n_max, config.effective_samples(), config.seed,
                                          settings, options);
    Json points = Json::array();
    csv << "body,n,degree,samples,value,ci_low,ci_high,shrunk,grown,in_window,excluded\n";
    for (const auto& p : fit.points) {
      points.push_back({{"n", p.n}, {"in_window", p.in_window}, {"excluded", p.excluded}, {"estimate", estimate_json(p.estimate)}});
      csv << fit.body << ',' << p.n << ',' << config.degree << ',' << p.estimate.samples << ',' << p.estimate.value << ','
          << p.estimate.ci_low << ',' << p.estimate.ci_high << ',' << p.estimate.shrunk.value << ','
          << p.estimate.grown.value << ',' << (p.in_window ? 1 : 0) << ',' << (p.excluded ? 1 : 0) << '\n';
      checks.add("n = " + std::to_string(p.n) + " inside window", "explicit volume bounds for " + config.cone,
                 p.estimate.value, bound_row_json(bound_row(bound_table(p.n, config.degree), body)), p.in_window,
                 body != Body::LinPowers);
      if (p.excluded) code = kExitUndecided;
    }
    double expected = -0.5, width = 0.35;
    if (body == Body::Sos) expected = -k / 2.0, width = 0.4;
    if (body == Body::LinPowers) expected = -k + 0.5, width = 0.5;
    result["slope"] = fit.slope;
    result["standard_error"] = fit.standard_error;
    result["expected_exponent"] = expected;
    result["points"] = points;
    checks.add("log-log slope near expected exponent", "asymptotic volume exponent", fit.slope,
               Json::array({expected - width, expected + width}), std::abs(fit.slope - expected) <= width, false);
  } else if (config.experiment == "polarity") {
    const PolarityChecks pc = santalo_and_rogers_shephard_checks(config.n, config.degree, config.effective_samples(),
                                                                 config.seed, settings, options);
    result["santalo_product"] = interval_json(pc.santalo_product);
    result["rogers_shephard_ratio"] = interval_json(pc.rogers_shephard);
    checks.add("Santalo product at most one", "Vol K Vol K^polar <= Vol B^2", pc.santalo_product.ci_low, 1.0, pc.santalo_ok);
    checks.add("sup-ball over nonneg section at least 1/4", "difference-body volume bound", pc.rogers_shephard.ci_high, 0.25,
               pc.rogers_shephard_ok);
    csv << "n,degree,samples,santalo,santalo_low,santalo_high,rs,rs_low,rs_high\n";
    csv << config.n << ',' << config.degree << ',' << pc.samples << ',' << pc.santalo_product.value << ','
        << pc.santalo_product.ci_low << ',' << pc.santalo_product.ci_high << ',' << pc.rogers_shephard.value << ','
        << pc.rogers_shephard.ci_low << ',' << pc.rogers_shephard.ci_high << '\n';
  } else {
    const BoundTable t = bound_table(config.n, config.degree);
    const SphereSearchOptions sphere = settings.sphere;
    const AverageEstimate linf = average_norm([&](const FormD& f) { return linf_norm(f, sphere); }, config.n,
                                              config.degree, config.effective_samples(), config.seed, options);
    const AverageEstimate sq = average_norm([](const FormD& f) { return sq_norm(f); }, config.n, config.degree,
                                            config.effective_samples(), derive_seed(config.seed, 1), options);
    auto avg_json = [](const AverageEstimate& a) {
      return Json{{"mean", a.mean}, {"standard_error", a.standard_error}, {"ci_low", a.ci_low}, {"ci_high", a.ci_high}, {"samples", a.samples}};
    };
    result["average_linf"] = avg_json(linf);
    result["average_sq"] = avg_json(sq);
    checks.add("average sup norm bound", "2 sqrt(2n(2k+1))", linf.mean + 3.0 * linf.standard_error, t.linf_average_bound,
               linf.mean + 3.0 * linf.standard_error <= t.linf_average_bound);
    checks.add("average sq norm bound", "4^{2k}(2k)! sqrt(24) n^{-k/2} / k!", sq.mean + 3.0 * sq.standard_error,
               t.sq_average_bound, sq.mean + 3.0 * sq.standard_error <= t.sq_average_bound);
    csv << "n,degree,samples,linf_mean,linf_se,sq_mean,sq_se\n";
    csv << config.n << ',' << config.degree << ',' << linf.samples << ',' << linf.mean << ',' << linf.standard_error << ','
        << sq.mean << ',' << sq.standard_error << '\n';
  }
  Report rep = finish(config, std::move(result), std::move(checks), code);
  rep.csv = csv.str();
  return rep;
}

// ------------------------------------------------------------------ dispatch

Report run(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  if (config.command == "verify") rep = cmd_verify(config);
  else if (config.command == "gauge") rep = cmd_gauge(config);
  else if (config.command == "volume") rep = cmd_volume(config);
  else if (config.command == "bounds") rep = cmd_bounds(config);
  else rep = cmd_experiment(config);
  if (config.timing)
    rep.document["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

RunConfig config_from_report(const std::string& report_text) {
  Json doc;
  try {
    doc = Json::parse(report_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.contains("schema") || doc["schema"] != kReportSchema) throw FormatError("report schema is not " + std::string(kReportSchema));
  if (!doc.contains("config")) throw FormatError("report has no embedded config");
  return RunConfig::from_json(doc["config"]);
}

}  // namespace conelab

#include "conelab/volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "conelab/apolarity.hpp"
#include "conelab/errors.hpp"
#include "conelab/harmonic.hpp"
#include "conelab/metrics.hpp"

namespace conelab {

std::string to_string(Body body) {
  switch (body) {
    case Body::Nonneg: return "nonneg";
    case Body::Sos: return "sos";
    case Body::LinPowers: return "linpowers";
    case Body::L2Ball: return "l2-ball";
    case Body::LinfBall: return "linf-ball";
    case Body::SqBall: return "sq-ball";
    case Body::SosPolar: return "sos-polar";
  }
  return "unknown";
}

Body parse_body(const std::string& name) {
  for (Body b : {Body::Nonneg, Body::Sos, Body::LinPowers, Body::L2Ball, Body::LinfBall, Body::SqBall, Body::SosPolar})
    if (to_string(b) == name) return b;
  throw UsageError("unknown cone/body '" + name + "' (nonneg, sos, linpowers, l2-ball, linf-ball, sq-ball, sos-polar)");
}

FormD sample_uniform_SM(int n, int two_k, Rng& rng) {
  const auto onb = orthonormal_basis({n, two_k, SpaceKind::MeanZero}, MetricKind::Integral);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(onb->dimension);
  double len = 0.0;
  while (len < 1e-12) {
    for (int i = 0; i < onb->dimension; ++i) z[i] = normal(rng);
    len = z.norm();
  }
  return onb->form_from_coordinates(z / len);
}

GaugeFn body_gauge(Body body, const GaugeSettings& settings) {
  auto exact = [](double v) { return GaugeSample{v, v, v, false}; };
  switch (body) {
    case Body::Nonneg:
      return [=](const FormD& f) { return exact(gauge_nonneg(f, settings.sphere).value); };
    case Body::Sos:
      return [=](const FormD& f) {
        const GaugeResult r = gauge_sos(f, settings.sos_tol);
        return GaugeSample{r.value, r.lower, r.upper, r.undecided > 0};
      };
    case Body::LinPowers:
      return [=](const FormD& f) {
        const GaugeResult r = gauge_linpowers(f, settings.linpowers);
        const bool open = !std::isfinite(r.upper);
        return GaugeSample{r.value, r.lower, r.upper, open};
      };
    case Body::L2Ball:
      return [=](const FormD& f) { return exact(integral_norm(f)); };
    case Body::LinfBall:
      return [=](const FormD& f) { return exact(linf_norm(f, settings.sphere)); };
    case Body::SqBall:
      return [=](const FormD& f) { return exact(sq_norm(f)); };
    case Body::SosPolar:
      return [=](const FormD& f) { return exact(support_sos(f)); };
  }
  throw std::logic_error("body_gauge: unreachable");
}

namespace {

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Percentile bootstrap of a statistic of resampled indices.
template <class Stat>
Interval bootstrap(const Stat& stat, int count, int resamples, std::uint64_t seed) {
  std::vector<int> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), 0);
  Interval out;
  out.value = stat(idx);
  if (resamples <= 0 || count < 2) {
    out.ci_low = out.ci_high = out.value;
    return out;
  }
  Rng rng(derive_seed(seed, 0xb0075ULL));
  std::uniform_int_distribution<int> pick(0, count - 1);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (auto& i : idx) i = pick(rng);
    stats[static_cast<std::size_t>(b)] = stat(idx);
  }
  std::sort(stats.begin(), stats.end());
  auto quantile = [&](double q) {
    const double pos = q * (resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, stats.size() - 1);
    return stats[lo] + (pos - static_cast<double>(lo)) * (stats[hi] - stats[lo]);
  };
  out.ci_low = std::min(out.value, quantile(0.025));
  out.ci_high = std::max(out.value, quantile(0.975));
  return out;
}

double safe_log(double g) { return std::log(std::max(g, 1e-300)); }

// log of (mean over idx of exp(-D l_i))^{1/D}
double log_volume(const std::vector<double>& logs, const std::vector<int>& idx, double D) {
  double top = -std::numeric_limits<double>::infinity();
  for (int i : idx) top = std::max(top, -D * logs[static_cast<std::size_t>(i)]);
  double sum = 0.0;
  for (int i : idx) sum += std::exp(-D * logs[static_cast<std::size_t>(i)] - top);
  return (top + std::log(sum / static_cast<double>(idx.size()))) / D;
}

}  // namespace

double log_power_mean_inverse(const std::vector<double>& log_values, double D) {
  std::vector<int> idx(log_values.size());
  std::iota(idx.begin(), idx.end(), 0);
  return log_volume(log_values, idx, D);
}

std::vector<GaugeSample> sample_gauges(const GaugeFn& gauge, int n, int two_k, int samples, std::uint64_t seed,
                                       int threads) {
  if (samples < 1) throw UsageError("samples must be positive");
  // Build shared caches once before threads fan out.
  orthonormal_basis({n, two_k, SpaceKind::MeanZero}, MetricKind::Integral);
  std::vector<GaugeSample> out(static_cast<std::size_t>(samples));
  parallel_for(samples, threads, [&](int i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = gauge(sample_uniform_SM(n, two_k, rng));
  });
  return out;
}

VolumeEstimate volume_from_gauges(const std::vector<GaugeSample>& gauges, int n, int two_k, std::uint64_t seed,
                                  int resamples) {
  VolumeEstimate est;
  est.n = n;
  est.two_k = two_k;
  est.samples = static_cast<int>(gauges.size());
  est.dimension = dim_mean_zero(n, two_k);
  const double D = static_cast<double>(est.dimension);
  const std::size_t N = gauges.size();

  std::vector<double> lv(N), ll(N), lu(N), g(N);
  for (std::size_t i = 0; i < N; ++i) {
    lv[i] = safe_log(gauges[i].value);
    ll[i] = safe_log(gauges[i].lower);
    lu[i] = safe_log(gauges[i].upper);
    g[i] = gauges[i].value;
    if (gauges[i].undecided) ++est.undecided;
  }
  auto volume_of = [&](const std::vector<double>& logs) {
    return [&logs, D](const std::vector<int>& idx) { return std::exp(log_volume(logs, idx, D)); };
  };
  const Interval main = bootstrap(volume_of(lv), est.samples, resamples, seed);
  est.value = main.value;
  est.ci_low = main.ci_low;
  est.ci_high = main.ci_high;
  est.shrunk = bootstrap(volume_of(lu), est.samples, resamples, seed);
  est.grown = bootstrap(volume_of(ll), est.samples, resamples, seed);
  est.jensen = bootstrap(
      [&](const std::vector<int>& idx) {
        double s = 0.0;
        for (int i : idx) s += g[static_cast<std::size_t>(i)];
        return static_cast<double>(idx.size()) / s;
      },
      est.samples, resamples, seed);

  double top = -std::numeric_limits<double>::infinity();
  for (double l : lv) top = std::max(top, -D * l);
  double sum = 0.0;
  for (double l : lv) sum += std::exp(-D * l - top);
  est.tail_share = 1.0 / sum;

  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(N);
  double var = 0.0;
  for (double x : g) var += (x - mean) * (x - mean);
  est.gauge_mean = mean;
  est.gauge_sd = N > 1 ? std::sqrt(var / static_cast<double>(N - 1)) : 0.0;
  est.gauge_min = *std::min_element(g.begin(), g.end());
  est.gauge_max = *std::max_element(g.begin(), g.end());
  return est;
}

VolumeEstimate normalized_volume(const GaugeFn& gauge, int n, int two_k, int samples, std::uint64_t seed,
                                 const VolumeOptions& options) {
  return volume_from_gauges(sample_gauges(gauge, n, two_k, samples, seed, options.threads), n, two_k, seed,
                            options.bootstrap);
}

AverageEstimate average_norm(const NormFn& norm, int n, int two_k, int samples, std::uint64_t seed,
                             const VolumeOptions& options) {
  const auto values = sample_gauges([&](const FormD& f) { const double v = norm(f); return GaugeSample{v, v, v, false}; },
                                    n, two_k, samples, seed, options.threads);
  std::vector<double> x(values.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = values[i].value;
  const Interval mean = bootstrap(
      [&](const std::vector<int>& idx) {
        double s = 0.0;
        for (int i : idx) s += x[static_cast<std::size_t>(i)];
        return s / static_cast<double>(idx.size());
      },
      samples, options.bootstrap, seed);
  AverageEstimate out;
  out.mean = mean.value;
  out.ci_low = mean.ci_low;
  out.ci_high = mean.ci_high;
  out.samples = samples;
  double var = 0.0;
  for (double v : x) var += (v - out.mean) * (v - out.mean);
  out.standard_error = samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
  return out;
}

BoundTable bound_table(int n, int two_k) {
  if (n < 2 || two_k < 2 || two_k % 2 != 0) throw std::invalid_argument("bound_table: need n >= 2 and even degree >= 2");
  const int k = two_k / 2;
  const double nd = n;
  const double kf = to_double(factorial(k));
  const double f2k = to_double(factorial(two_k));
  const double four2k = std::pow(4.0, two_k);
  const double s24 = std::sqrt(24.0);
  BoundTable t;
  t.n = n;
  t.two_k = two_k;
  t.c = t_matrix(n, two_k).c;
  t.dim_M = dim_mean_zero(n, two_k);
  t.dim_H = harmonic_dims(n, two_k).back();
  const Rational ratio(2 * k - 1, n + 2 * k - 2);
  t.alpha = Rational(1) - ratio * ratio;
  const double alpha = to_double(t.alpha);

  t.nonneg = {"nonneg", 1.0 / (2.0 * std::sqrt(4.0 * k + 2.0) * std::sqrt(nd)),
              4.0 * std::sqrt(2.0 * k * k / (4.0 * k * k + nd - 2.0))};
  t.sos = {"sos", kf * kf / (four2k * f2k * s24) * std::pow(nd, k / 2.0) / std::pow(nd / 2.0 + two_k, k),
           four2k * f2k * s24 / kf * std::pow(nd, -k / 2.0)};
  t.linpowers = {"linpowers",
                 kf * std::sqrt(4.0 * k * k + nd - 2.0) / (4.0 * k * std::sqrt(2.0) * std::pow(nd / 2.0 + two_k, k)),
                 2.0 * std::sqrt(nd * (4.0 * k + 2.0)) * std::pow(kf / std::pow(nd / 2.0 + k, k), alpha)};
  t.linf_average_bound = 2.0 * std::sqrt(2.0 * nd * (two_k + 1.0));
  t.sq_average_bound = t.sos.upper;
  return t;
}

const BoundRow& bound_row(const BoundTable& table, Body body) {
  switch (body) {
    case Body::Nonneg: return table.nonneg;
    case Body::Sos: return table.sos;
    case Body::LinPowers: return table.linpowers;
    default: throw UsageError("no bound window for body " + to_string(body));
  }
}

bool volume_in_window(const VolumeEstimate& est, const BoundRow& row) {
  return est.shrunk.ci_high >= row.lower && est.grown.ci_low <= row.upper;
}

SlopeFit slope_experiment(Body body, int k, int n_min, int n_max, int samples, std::uint64_t seed,
                          const GaugeSettings& settings, const VolumeOptions& options) {
  if (n_min < 2 || n_max < n_min) throw UsageError("slope_experiment: need 2 <= n-min <= n-max");
  SlopeFit fit;
  fit.body = to_string(body);
  fit.k = k;
  const GaugeFn gauge = body_gauge(body, settings);
  std::vector<double> xs, ys;
  for (int n = n_min; n <= n_max; ++n) {
    SlopePoint p;
    p.n = n;
    p.estimate = normalized_volume(gauge, n, 2 * k, samples, derive_seed(seed, static_cast<std::uint64_t>(n)), options);
    p.estimate.body = fit.body;
    p.in_window = volume_in_window(p.estimate, bound_row(bound_table(n, 2 * k), body));
    p.excluded = 2 * p.estimate.undecided > p.estimate.samples;
    if (!p.excluded) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(p.estimate.value));
    }
    fit.points.push_back(std::move(p));
  }
  const std::size_t m = xs.size();
  if (m >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    if (m > 2) {
      double rss = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double e = ys[i] - my - fit.slope * (xs[i] - mx);
        rss += e * e;
      }
      fit.standard_error = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    }
  }
  return fit;
}

PolarityChecks santalo_and_rogers_shephard_checks(int n, int two_k, int samples, std::uint64_t seed,
                                                  const GaugeSettings& settings, const VolumeOptions& options) {
  PolarityChecks out;
  out.n = n;
  out.two_k = two_k;
  out.samples = samples;
  const double D = static_cast<double>(dim_mean_zero(n, two_k));

  struct Row {
    double sos, polar, nonneg, linf;
  };
  std::vector<Row> rows(static_cast<std::size_t>(samples));
  orthonormal_basis({n, two_k, SpaceKind::MeanZero}, MetricKind::Integral);
  parallel_for(samples, options.threads, [&](int i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const FormD f = sample_uniform_SM(n, two_k, rng);
    const SphereExtrema ext = sphere_extrema(f, settings.sphere);
    Row r;
    r.sos = gauge_sos(f, settings.sos_tol).value;
    r.polar = support_sos(f);
    r.nonneg = std::max(0.0, -ext.min.value);
    r.linf = std::max(ext.max.value, -ext.min.value);
    rows[static_cast<std::size_t>(i)] = r;
  });
  std::vector<double> ls(rows.size()), lp(rows.size()), lc(rows.size()), li(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ls[i] = safe_log(rows[i].sos);
    lp[i] = safe_log(rows[i].polar);
    lc[i] = safe_log(rows[i].nonneg);
    li[i] = safe_log(rows[i].linf);
  }
  out.santalo_product = bootstrap(
      [&](const std::vector<int>& idx) { return std::exp(log_volume(ls, idx, D) + log_volume(lp, idx, D)); }, samples,
      options.bootstrap, seed);
  out.rogers_shephard = bootstrap(
      [&](const std::vector<int>& idx) { return std::exp(log_volume(li, idx, D) - log_volume(lc, idx, D)); }, samples,
      options.bootstrap, seed);
  out.santalo_ok = out.santalo_product.ci_low <= 1.0;
  out.rogers_shephard_ok = out.rogers_shephard.ci_high >= 0.25;
  return out;
}

}  // namespace conelab

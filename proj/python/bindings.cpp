#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conelab/apolarity.hpp"
#include "conelab/cones.hpp"
#include "conelab/errors.hpp"
#include "conelab/harmonic.hpp"
#include "conelab/metrics.hpp"
#include "conelab/polyio.hpp"
#include "conelab/report.hpp"
#include "conelab/volume.hpp"

namespace py = pybind11;
using namespace conelab;

namespace {

// Forms cross the boundary as the polynomial file text, exact where possible.
FormQ exact(const std::string& text) { return read_form_exact(text); }
FormD numeric(const std::string& text) { return read_form_numeric(text); }

py::dict gauge_dict(const GaugeResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["lower"] = r.lower;
  d["upper"] = r.upper;
  d["method"] = to_string(r.method);
  if (!r.point.empty()) d["point"] = r.point;
  if (r.witness) d["witness"] = write_form_text(*r.witness);
  d["undecided"] = r.undecided;
  return d;
}

py::dict interval_dict(const Interval& i) {
  py::dict d;
  d["value"] = i.value;
  d["ci_low"] = i.ci_low;
  d["ci_high"] = i.ci_high;
  return d;
}

}  // namespace

PYBIND11_MODULE(_conelab, m) {
  m.doc() = "conelab core: forms on the sphere, metrics, harmonic decomposition, cone gauges and volumes";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_ValueError);
  py::register_exception<DimensionMismatchError>(m, "DimensionMismatchError", PyExc_ValueError);

  m.def("normalize_form", [](const std::string& text) { return write_form_text(exact(text)); },
        "Parse a polynomial document and write it back in canonical exact form.");
  m.def("evaluate", [](const std::string& text, std::vector<double> x) {
    return evaluate<double>(numeric(text), std::span<const double>(x));
  });
  m.def("r_power", [](int n, int k) { return write_form_text(r_power<Rational>(n, k)); });
  m.def("project_to_M", [](const std::string& text) { return write_form_text(project_to_M(exact(text))); });

  m.def("inner_product", [](const std::string& metric, const std::string& f, const std::string& g) {
    return to_string(inner_product(parse_metric_kind(metric), exact(f), exact(g)));
  }, py::arg("metric"), py::arg("f"), py::arg("g"), "Exact inner product as a 'p/q' string (integral | apolar | gradient).");
  m.def("dim_mean_zero", &dim_mean_zero);

  m.def("harmonic_decompose", [](const std::string& text) {
    std::map<int, std::string> out;
    for (const auto& [d, h] : harmonic_decompose(exact(text)).components) out[d] = write_form_text(h);
    return out;
  }, "Harmonic components h_{2d} keyed by d.");
  m.def("metric_ratio", [](int n, int k, int d) { return to_string(metric_ratio_formula(n, k, d)); });

  m.def("t_spectrum", [](int n, int two_k) {
    std::vector<std::pair<int, std::string>> rows;
    for (const auto& r : t_spectrum(n, two_k)) rows.emplace_back(r.d, to_string(r.eigenvalue));
    return rows;
  });
  m.def("apply_t", [](const std::string& text) {
    const FormQ f = exact(text);
    return write_form_text(t_matrix(f.n(), f.degree()).apply(f));
  });

  m.def("gauge", [](const std::string& text, const std::string& cone, double tol) {
    const FormD f = numeric(text);
    switch (parse_body(cone)) {
      case Body::Nonneg: return gauge_dict(gauge_nonneg(f));
      case Body::Sos: return gauge_dict(gauge_sos(f, tol));
      case Body::LinPowers: return gauge_dict(gauge_linpowers(f));
      default: throw UsageError("gauge: cone must be nonneg, sos or linpowers");
    }
  }, py::arg("form"), py::arg("cone"), py::arg("tol") = 1e-7);
  m.def("sos_feasible", [](const std::string& text, double tol) {
    const SosFeasibility r = sos_feasible(numeric(text), tol);
    py::dict d;
    d["status"] = to_string(r.status);
    d["stage"] = r.stage;
    d["min_eigenvalue"] = r.certificate.min_eigenvalue;
    return d;
  }, py::arg("form"), py::arg("tol") = 1e-8);

  m.def("normalized_volume", [](const std::string& cone, int n, int degree, int samples, std::uint64_t seed) {
    const Body body = parse_body(cone);
    VolumeEstimate e;
    {
      py::gil_scoped_release release;
      e = normalized_volume(body_gauge(body), n, degree, samples, seed);
    }
    py::dict d;
    d["value"] = e.value;
    d["ci_low"] = e.ci_low;
    d["ci_high"] = e.ci_high;
    d["shrunk"] = interval_dict(e.shrunk);
    d["grown"] = interval_dict(e.grown);
    d["jensen"] = e.jensen.value;
    d["dimension"] = e.dimension;
    d["samples"] = e.samples;
    return d;
  }, py::arg("cone"), py::arg("n"), py::arg("degree"), py::arg("samples"), py::arg("seed") = 42);

  m.def("bound_table", [](int n, int degree) {
    const BoundTable t = bound_table(n, degree);
    py::dict d;
    for (const BoundRow* r : {&t.nonneg, &t.sos, &t.linpowers}) d[py::str(r->body)] = py::make_tuple(r->lower, r->upper);
    d["alpha"] = to_string(t.alpha);
    d["c"] = to_string(t.c);
    return d;
  });

  m.def("run", [](const std::string& config_json) {
    const RunConfig c = RunConfig::from_json(Json::parse(config_json));
    const Report r = run(c);
    return py::make_tuple(r.text(), r.exit_code);
  }, "Run a command from a JSON config (the 'config' object of a report). Returns (report_text, exit_code).");
}

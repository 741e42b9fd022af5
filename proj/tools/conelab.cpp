#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conelab/errors.hpp"
#include "conelab/polyio.hpp"
#include "conelab/report.hpp"

using namespace conelab;

namespace {

// Shared flags. Every subcommand accepts all of them; irrelevant ones are ignored.
void add_common(CLI::App* app, RunConfig& c, std::string& input, std::string& config_file) {
  app->add_option("--n", c.n, "number of variables");
  app->add_option("--deg", c.degree, "even degree 2k");
  app->add_option("--cone", c.cone, "nonneg | sos | linpowers | l2-ball | linf-ball | sq-ball | sos-polar");
  app->add_option("--samples", c.samples, "Monte Carlo samples (0: per-cone default)");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--tol", c.tol, "gauge tolerance");
  app->add_option("--grid", c.grid, "sphere grid size for the linpowers LP");
  app->add_option("--mode", c.mode, "exact | numeric");
  app->add_option("--bootstrap", c.bootstrap, "bootstrap resamples");
  app->add_option("--input", input, "polynomial file");
  app->add_option("--out", c.out, "report path (default: stdout)");
  app->add_option("--csv", c.csv, "also write a flat CSV table here");
  app->add_option("--threads", c.threads, "worker threads (0: all cores)");
  app->add_flag("--timing", c.timing, "add wall-clock seconds to the report");
  app->add_option("--config", config_file, "re-run the config embedded in an existing report");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"conelab: metrics, harmonic decomposition and cone volumes for forms on the sphere"};
  app.require_subcommand(1);
  RunConfig c;
  std::string input, config_file;
  int k = 0;

  auto* verify = app.add_subcommand("verify", "exact identity suite at (n, 2k)");
  auto* gauge = app.add_subcommand("gauge", "gauge of an input form for one cone");
  auto* volume = app.add_subcommand("volume", "normalized volume estimate");
  auto* bounds = app.add_subcommand("bounds", "explicit volume bound table");
  auto* experiment = app.add_subcommand("experiment", "slopes | polarity | averages");
  for (auto* sub : {verify, gauge, volume, bounds, experiment}) add_common(sub, c, input, config_file);
  experiment->add_option("kind", c.experiment, "slopes | polarity | averages (taken from --config if omitted)");
  experiment->add_option("--k", k, "half degree (slopes)");
  experiment->add_option("--n-min", c.n_min, "smallest n (slopes)");
  experiment->add_option("--n-max", c.n_max, "largest n (slopes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* used = app.get_subcommands().front();
  c.command = used->get_name();
  if (k > 0) c.degree = 2 * k;

  if (!config_file.empty()) {
    RunConfig embedded = config_from_report(read_file(config_file));
    if (embedded.command != c.command)
      throw UsageError("report was produced by '" + embedded.command + "', not '" + c.command + "'");
    embedded.out = c.out;
    embedded.csv = c.csv;
    embedded.timing = c.timing;
    embedded.threads = c.threads;
    c = embedded;
  } else if (!input.empty()) {
    const std::string text = read_file(input);
    const FormD f = read_form_numeric(text);
    // Unspecified dimensions come from the file.
    if (used->count("--n") == 0) c.n = f.n();
    if (used->count("--deg") == 0) c.degree = f.degree();
    c.input_form = Json::parse(text).dump();
  }

  const Report report = run(c);
  if (c.out.empty())
    std::cout << report.text();
  else
    write_file_atomic(c.out, report.text());
  if (!c.csv.empty() && !report.csv.empty()) write_file_atomic(c.csv, report.csv);
  if (report.exit_code != kExitOk && report.document.contains("first_failure"))
    std::cerr << "conelab: failed check: " << report.document["first_failure"].get<std::string>() << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "conelab: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "conelab: format: " << e.what() << "\n";
    return kExitFormat;
  } catch (const UnsupportedError& e) {
    std::cerr << "conelab: unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const DimensionMismatchError& e) {
    std::cerr << "conelab: mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "conelab: format: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "conelab: error: " << e.what() << "\n";
    return 70;
  }
}

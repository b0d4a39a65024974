// Command-line front end: network generation, the path-stretch study,
// ellipse-model fitting and validation, single trials, sweeps and reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfgeo/config.hpp"
#include "qfgeo/ellipse_model.hpp"
#include "qfgeo/event_log.hpp"
#include "qfgeo/geometry.hpp"
#include "qfgeo/harness.hpp"
#include "qfgeo/metrics.hpp"
#include "qfgeo/sim.hpp"
#include "qfgeo/stretch.hpp"

namespace fs = std::filesystem;
using namespace qfgeo;

namespace {

constexpr int kUsage = 1;
constexpr int kInvariant = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string header_comment(std::uint64_t seed) {
  return "# qfgeo " + std::string(kVersion) + " seed=" + std::to_string(seed) + "\n";
}

// Scenario overrides shared by simulate and sweep.
struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> protocol;
  std::optional<double> density;
  std::optional<std::size_t> size;
  std::optional<std::size_t> flows;
  std::optional<double> mobility;
  std::optional<std::string> jammer;
  bool unbounded = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key=value trial configuration file");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--protocol", protocol, "qfgeo | gf | mcr | qfgeo_unbounded");
    app->add_option("--density", density, "network density (nodes per R^2)");
    app->add_option("--size", size, "number of nodes");
    app->add_option("--flows", flows, "number of concurrent flows");
    app->add_option("--mobility", mobility, "node speed in m/s (0 = static)");
    app->add_option("--jammer", jammer, "on | off");
    app->add_flag("--unbounded", unbounded, "search without an ellipse bound");
  }

  TrialConfig apply() const {
    TrialConfig cfg = config.empty() ? TrialConfig{} : load_trial_config(config);
    if (seed) cfg.seed = *seed;
    if (protocol) cfg.protocol = parse_protocol(*protocol);
    if (density) cfg.network.rho = *density;
    if (size) cfg.network.n = *size;
    if (flows) cfg.flow_count = *flows;
    if (mobility) cfg.mobility_mps = *mobility;
    if (jammer) cfg.jammer.enabled = parse_bool(*jammer);
    if (unbounded) {
      if (cfg.protocol != ProtocolKind::qfgeo && cfg.protocol != ProtocolKind::qfgeo_unbounded) {
        throw ConfigError("--unbounded applies to the qfgeo protocol only");
      }
      cfg.protocol = ProtocolKind::qfgeo_unbounded;
    }
    return cfg;
  }
};

int cmd_netgen(std::size_t n, double rho, std::uint64_t seed, std::size_t count,
               const std::string& out) {
  fs::create_directories(out);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = count == 1 ? seed : derive_seed(seed, i);
    GraphFile file{{n, rho}, s, generate_network({n, rho}, s)};
    std::ostringstream text;
    text << header_comment(s);
    write_graph(text, file);
    char name[64];
    std::snprintf(name, sizeof name, "network_%04zu.txt", i);
    write_file_atomic(fs::path(out) / name, text.str());
  }
  std::printf("wrote %zu network(s) to %s\n", count, out.c_str());
  return 0;
}

int cmd_stretch(std::size_t n, std::vector<double> densities, std::size_t trials,
                std::uint64_t seed, unsigned workers, const std::string& out) {
  StudyConfig study{n, densities.empty() ? standard_densities() : densities, trials, seed,
                    workers};
  const auto result = sample_stretch(study);
  std::ostringstream text;
  text << header_comment(seed);
  write_samples_csv(text, result.samples);
  write_file_atomic(out, text.str());
  for (const auto& t : result.tallies) {
    std::printf("rho=%.4f attempted=%zu retained=%zu\n", t.rho, t.attempted, t.retained);
  }
  return 0;
}

std::vector<StretchSample> load_samples(const std::vector<std::string>& paths) {
  std::vector<StretchSample> all;
  for (const auto& p : paths) {
    std::istringstream in(read_text(p));
    auto part = read_samples_csv(in);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

void print_coverage(const FitReport& report) {
  std::printf("rho,coverage_percent,samples\n");
  for (const auto& r : report.rows) {
    std::printf("%.4f,%.2f,%zu\n", r.rho, 100.0 * r.coverage, r.samples);
  }
}

int cmd_fit(const std::vector<std::string>& inputs, double tau, double gamma, double ell_min,
            const std::string& out, const std::string& report_path) {
  const auto samples = load_samples(inputs);
  const EllipseModel model = fit_quantile(samples, tau, gamma, ell_min);
  std::ostringstream text;
  text << "# qfgeo " << kVersion << " tau=" << tau << " samples=" << samples.size() << "\n";
  write_model(text, model);
  write_file_atomic(out, text.str());
  const FitReport report = coverage_table(model, samples);
  if (!report_path.empty()) {
    std::ostringstream csv;
    write_fit_report_csv(csv, report);
    write_file_atomic(report_path, csv.str());
  }
  std::printf("alpha=%.6f beta=%.6f gamma=%g ell_min=%g\n", model.alpha, model.beta,
              model.gamma, model.ell_min);
  print_coverage(report);
  return 0;
}

int cmd_validate(const std::string& model_path, const std::vector<std::string>& inputs,
                 std::size_t n, std::size_t trials, std::uint64_t seed, unsigned workers,
                 const std::string& out) {
  EllipseModel model;
  if (!model_path.empty()) {
    std::istringstream in(read_text(model_path));
    model = read_model(in);
  }
  std::vector<StretchSample> samples;
  if (!inputs.empty()) {
    samples = load_samples(inputs);
  } else {
    samples = sample_stretch({n, standard_densities(), trials, seed, workers}).samples;
  }
  const FitReport report = coverage_table(model, samples);
  if (!out.empty()) {
    std::ostringstream csv;
    csv << header_comment(seed);
    write_fit_report_csv(csv, report);
    write_file_atomic(out, csv.str());
  }
  print_coverage(report);
  return 0;
}

int cmd_simulate(const Overrides& ov, const std::string& out) {
  const TrialConfig cfg = ov.apply();
  const TrialResult result = run_trial(cfg);
  const std::string prov = provenance(cfg);
  const std::string json = report_json(result.report, prov);
  if (out.empty()) {
    std::cout << json;
    return 0;
  }
  fs::create_directories(out);
  write_file_atomic(fs::path(out) / "report.json", json);
  std::ostringstream events, trace;
  events << "# " << prov << "\n";
  write_event_log_csv(events, result.log);
  write_file_atomic(fs::path(out) / "events.csv", events.str());
  trace << "# " << prov << "\n";
  write_trace_csv(trace, result.log);
  write_file_atomic(fs::path(out) / "trace.csv", trace.str());
  write_file_atomic(fs::path(out) / "config.txt", "# " + prov + "\n" + serialize_trial_config(cfg));
  std::printf("goodput_efficiency=%.6f reception_ratio=%.6f latency_s=%.6f\n",
              result.report.goodput_efficiency, result.report.reception_ratio,
              result.report.latency_s);
  return 0;
}

int cmd_sweep(const Overrides& ov, const std::vector<std::size_t>& sizes,
              const std::vector<double>& densities, const std::vector<std::size_t>& flows,
              const std::vector<double>& mobility, const std::vector<std::string>& jammer,
              const std::vector<std::string>& protocols, std::size_t trials, unsigned workers,
              const std::string& out) {
  SweepSpec spec;
  spec.base = ov.apply();
  spec.seed = spec.base.seed;
  spec.trials = trials;
  if (!sizes.empty()) spec.sizes = sizes;
  else if (ov.size) spec.sizes = {*ov.size};
  if (!densities.empty()) spec.densities = densities;
  else if (ov.density) spec.densities = {*ov.density};
  if (!flows.empty()) spec.flow_counts = flows;
  else if (ov.flows) spec.flow_counts = {*ov.flows};
  if (!mobility.empty()) spec.mobility_mps = mobility;
  else if (ov.mobility) spec.mobility_mps = {*ov.mobility};
  if (!jammer.empty()) {
    spec.jammer.clear();
    for (const auto& j : jammer) spec.jammer.push_back(parse_bool(j));
  } else if (ov.jammer) {
    spec.jammer = {parse_bool(*ov.jammer)};
  }
  if (!protocols.empty()) {
    spec.protocols.clear();
    for (const auto& p : protocols) spec.protocols.push_back(parse_protocol(p));
  } else if (ov.protocol || ov.unbounded) {
    spec.protocols = {spec.base.protocol};
  }
  const std::size_t total = expand(spec).size();
  std::size_t done = 0;
  const auto outcome = run_sweep(spec, out, workers, [&](const SweepCell& c, bool skipped) {
    ++done;
    std::fprintf(stderr, "[%zu/%zu] %s%s\n", done, total, cell_name(c).c_str(),
                 skipped ? " (already present)" : "");
  });
  std::printf("ran %zu trial(s), skipped %zu; aggregate in %s\n", outcome.ran,
              outcome.skipped, (fs::path(out) / "aggregate.csv").c_str());
  return 0;
}

int cmd_report(const std::string& in, const std::string& out) {
  std::vector<AggregateRow> rows;
  if (fs::is_directory(in)) {
    const fs::path trials = fs::path(in) / "trials";
    rows = collect_reports(fs::is_directory(trials) ? trials : fs::path(in));
  } else {
    std::istringstream text(read_text(in));
    rows = read_aggregate_csv(text);
  }
  std::ostringstream summary;
  summary << "# qfgeo " << kVersion << " source=" << in << "\n";
  write_summary(summary, rows);
  if (out.empty()) {
    std::cout << summary.str();
  } else {
    write_file_atomic(out, summary.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-aware bounded geographic routing: analysis and simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::size_t n = 64;
  double rho = 2.0;
  std::uint64_t seed = 1;
  std::size_t count = 1;
  std::string out;
  auto* netgen = app.add_subcommand("netgen", "generate random unit-disk networks");
  netgen->add_option("--size", n, "number of nodes");
  netgen->add_option("--density", rho, "nodes per R^2");
  netgen->add_option("--seed", seed, "seed");
  netgen->add_option("--count", count, "number of networks");
  netgen->add_option("--out", out, "output directory")->required();

  std::size_t study_n = 343, trials = 2000;
  std::vector<double> densities;
  unsigned workers = 0;
  auto* stretch = app.add_subcommand("stretch", "sample shortest-path stretch");
  stretch->add_option("--size", study_n, "nodes per network");
  stretch->add_option("--density", densities, "densities (default sqrt2,2,3,4,5)");
  stretch->add_option("--trials", trials, "networks per density");
  stretch->add_option("--seed", seed, "master seed");
  stretch->add_option("--workers", workers, "worker threads (0 = all cores)");
  stretch->add_option("--out", out, "output CSV")->required();

  std::vector<std::string> inputs;
  double tau = 0.99, gamma = 2.0, ell_min = 1.05;
  std::string report_path;
  auto* fit = app.add_subcommand("fit", "fit the ellipse-factor bound by quantile regression");
  fit->add_option("--in", inputs, "stretch sample CSVs")->required();
  fit->add_option("--tau", tau, "quantile");
  fit->add_option("--gamma", gamma, "density exponent");
  fit->add_option("--ell-min", ell_min, "minimum ellipse factor");
  fit->add_option("--out", out, "model file")->required();
  fit->add_option("--report", report_path, "coverage CSV");

  std::string model_path;
  auto* val = app.add_subcommand("validate", "per-density coverage of an ellipse model");
  val->add_option("--model", model_path, "model file (default: shipped coefficients)");
  val->add_option("--in", inputs, "stretch sample CSVs (default: regenerate)");
  val->add_option("--size", study_n, "nodes per network when regenerating");
  val->add_option("--trials", trials, "networks per density when regenerating");
  val->add_option("--seed", seed, "master seed when regenerating");
  val->add_option("--workers", workers, "worker threads");
  val->add_option("--out", out, "coverage CSV");

  Overrides sim_ov;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "run one trial");
  sim_ov.attach(simulate);
  simulate->add_option("--out", sim_out, "output directory (default: report to stdout)");

  Overrides sweep_ov;
  std::vector<std::size_t> sweep_sizes, sweep_flows;
  std::vector<double> sweep_densities, sweep_mobility;
  std::vector<std::string> sweep_jammer, sweep_protocols;
  std::size_t sweep_trials = 4;
  auto* sweep = app.add_subcommand("sweep", "run a cross-product of scenarios");
  sweep_ov.attach(sweep);
  sweep->add_option("--sizes", sweep_sizes, "network sizes");
  sweep->add_option("--densities", sweep_densities, "densities");
  sweep->add_option("--flow-counts", sweep_flows, "flow counts");
  sweep->add_option("--mobilities", sweep_mobility, "speeds in m/s");
  sweep->add_option("--jammers", sweep_jammer, "on/off values");
  sweep->add_option("--protocols", sweep_protocols, "protocols");
  sweep->add_option("--trials", sweep_trials, "trials per cell");
  sweep->add_option("--workers", workers, "worker threads");
  sweep->add_option("--out", out, "output directory")->required();

  std::string report_in;
  auto* report = app.add_subcommand("report", "summarize sweep results per figure");
  report->add_option("--in", report_in, "sweep directory or aggregate CSV")->required();
  report->add_option("--out", out, "summary file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "qfgeo: %s\n", e.what());
    return kUsage;
  }

  try {
    if (*netgen) return cmd_netgen(n, rho, seed, count, out);
    if (*stretch) return cmd_stretch(study_n, densities, trials, seed, workers, out);
    if (*fit) return cmd_fit(inputs, tau, gamma, ell_min, out, report_path);
    if (*val) return cmd_validate(model_path, inputs, study_n, trials, seed, workers, out);
    if (*simulate) return cmd_simulate(sim_ov, sim_out);
    if (*sweep) {
      return cmd_sweep(sweep_ov, sweep_sizes, sweep_densities, sweep_flows, sweep_mobility,
                       sweep_jammer, sweep_protocols, sweep_trials, workers, out);
    }
    if (*report) return cmd_report(report_in, out);
  } catch (const InvariantViolation& e) {
    std::fprintf(stderr, "qfgeo: invariant violated: %s\n", e.what());
    return kInvariant;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "qfgeo: %s\n", e.what());
    return kUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "qfgeo: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "qfgeo: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qfgeo: %s\n", e.what());
    return kInvariant;
  }
  return kUsage;
}

#include "qfgeo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "qfgeo/config.hpp"
#include "qfgeo/random.hpp"

namespace qfgeo {

namespace fs = std::filesystem;

std::vector<SweepCell> expand(const SweepSpec& spec) {
  std::vector<SweepCell> cells;
  std::uint64_t scenario = 0;
  for (std::size_t n : spec.sizes) {
    for (double rho : spec.densities) {
      for (std::size_t k : spec.flow_counts) {
        for (double m : spec.mobility_mps) {
          for (bool jam : spec.jammer) {
            for (std::size_t t = 0; t < spec.trials; ++t) {
              // Protocols share a seed so they are compared on the same
              // network, flows and mobility pattern.
              const std::uint64_t seed = derive_seed(spec.seed, scenario, t);
              for (ProtocolKind p : spec.protocols) {
                cells.push_back({n, rho, k, m, jam, p, t, seed});
              }
            }
            ++scenario;
          }
        }
      }
    }
  }
  return cells;
}

TrialConfig cell_config(const SweepSpec& spec, const SweepCell& cell) {
  TrialConfig cfg = spec.base;
  cfg.network = {cell.size, cell.density};
  cfg.positions.clear();
  cfg.flows.clear();
  cfg.flow_count = cell.flows;
  cfg.mobility_mps = cell.mobility_mps;
  cfg.jammer.enabled = cell.jammer;
  cfg.protocol = cell.protocol;
  cfg.seed = cell.seed;
  cfg.log_beacons = false;
  return cfg;
}

std::string cell_name(const SweepCell& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "n%zu_rho%.4f_f%zu_m%g_j%d_%s_t%zu.json", c.size, c.density,
                c.flows, c.mobility_mps, c.jammer ? 1 : 0, to_string(c.protocol), c.trial);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

SweepOutcome run_sweep(const SweepSpec& spec, const fs::path& out_dir, unsigned workers,
                       const SweepProgress& progress) {
  const auto cells = expand(spec);
  for (const auto& c : cells) validate(cell_config(spec, c));
  const fs::path trials_dir = out_dir / "trials";
  fs::create_directories(trials_dir);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0}, ran{0}, skipped{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          const auto& cell = cells[i];
          const fs::path target = trials_dir / cell_name(cell);
          bool skip = fs::exists(target);
          try {
            if (!skip) {
              const TrialConfig cfg = cell_config(spec, cell);
              const TrialResult r = run_trial(cfg);
              write_file_atomic(target, report_json(r.report, provenance(cfg)));
              ++ran;
            } else {
              ++skipped;
            }
          } catch (...) {
            std::lock_guard lock(progress_mutex);
            if (!failure) failure = std::current_exception();
            next = cells.size();
            return;
          }
          if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(cell, skip);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::ostringstream csv;
  csv << "# qfgeo " << kVersion << " config=" << config_hash(spec.base)
      << " sweep_seed=" << spec.seed << "\n";
  write_aggregate_csv(csv, collect_reports(trials_dir));
  write_file_atomic(out_dir / "aggregate.csv", csv.str());
  return {ran.load(), skipped.load()};
}

AggregateRow aggregate_row(const MetricsReport& r) {
  AggregateRow row;
  for (const auto& [k, v] : r.params_echo) {
    if (k == "size") row.size = static_cast<std::size_t>(parse_int(v));
    else if (k == "density") row.density = parse_double(v);
    else if (k == "flows") row.flows = static_cast<std::size_t>(parse_int(v));
    else if (k == "mobility_mps") row.mobility_mps = parse_double(v);
    else if (k == "jammer") row.jammer = parse_bool(v);
    else if (k == "protocol") row.protocol = v;
    else if (k == "seed") row.seed = std::stoull(v);
  }
  row.goodput_bps = r.goodput_bps;
  row.reception_ratio = r.reception_ratio;
  row.latency_s = r.latency_s;
  row.goodput_efficiency = r.goodput_efficiency;
  row.flows_delivered = r.flows_delivered;
  return row;
}

std::vector<AggregateRow> collect_reports(const fs::path& trials_dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(trials_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<AggregateRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream text;
    text << in.rdbuf();
    rows.push_back(aggregate_row(parse_report_json(text.str())));
  }
  return rows;
}

namespace {

constexpr const char* kAggregateHeader =
    "size,density,flows,mobility_mps,jammer,protocol,seed,goodput_bps,reception_ratio,"
    "latency_s,goodput_efficiency,flows_delivered";

}  // namespace

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateHeader << "\n";
  char buf[320];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%zu,%.17g,%d,%s,%llu,%.17g,%.17g,%.17g,%.17g,%zu\n",
                  r.size, r.density, r.flows, r.mobility_mps, r.jammer ? 1 : 0,
                  r.protocol.c_str(), static_cast<unsigned long long>(r.seed), r.goodput_bps,
                  r.reception_ratio, r.latency_s, r.goodput_efficiency, r.flows_delivered);
    out << buf;
  }
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
  }
  if (line != kAggregateHeader) {
    throw std::runtime_error("aggregate csv: unexpected header");
  }
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[12];
    for (auto& x : f) std::getline(ls, x, ',');
    AggregateRow r;
    r.size = std::stoull(f[0]);
    r.density = std::stod(f[1]);
    r.flows = std::stoull(f[2]);
    r.mobility_mps = std::stod(f[3]);
    r.jammer = f[4] == "1";
    r.protocol = f[5];
    r.seed = std::stoull(f[6]);
    r.goodput_bps = std::stod(f[7]);
    r.reception_ratio = std::stod(f[8]);
    r.latency_s = std::stod(f[9]);
    r.goodput_efficiency = std::stod(f[10]);
    r.flows_delivered = std::stoull(f[11]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

struct Mean {
  double ge = 0.0, rr = 0.0, lat = 0.0;
  std::size_t count = 0;

  void add(const AggregateRow& r) {
    ge += r.goodput_efficiency;
    rr += r.reception_ratio;
    lat += r.latency_s;
    ++count;
  }
  double get_ge() const { return count ? ge / count : 0.0; }
  double get_rr() const { return count ? rr / count : 0.0; }
  double get_lat() const { return count ? lat / count : 0.0; }
};

double percent_change(double bounded, double unbounded) {
  return unbounded == 0.0 ? 0.0 : 100.0 * (bounded - unbounded) / unbounded;
}

}  // namespace

void write_summary(std::ostream& out, const std::vector<AggregateRow>& rows) {
  using FigureKey = std::tuple<bool, bool>;  // mobile, jammed
  using RowKey = std::tuple<std::size_t, double, std::string>;
  std::map<FigureKey, std::map<RowKey, Mean>> figures;
  for (const auto& r : rows) {
    figures[{r.mobility_mps > 0.0, r.jammer}][{r.size, r.density, r.protocol}].add(r);
  }

  char buf[256];
  for (const auto& [fk, table] : figures) {
    const auto [mobile, jammed] = fk;
    out << "# " << (mobile ? "mobile" : "static") << ", " << (jammed ? "jammed" : "unjammed")
        << "\n";
    out << "size,density,protocol,goodput_efficiency,reception_ratio,latency_s,trials\n";
    for (const auto& [rk, m] : table) {
      std::snprintf(buf, sizeof buf, "%zu,%.4f,%s,%.6f,%.6f,%.6f,%zu\n", std::get<0>(rk),
                    std::get<1>(rk), std::get<2>(rk).c_str(), m.get_ge(), m.get_rr(),
                    m.get_lat(), m.count);
      out << buf;
    }
    out << "\n";
  }

  // Bounded versus unbounded search, pooled by regime.
  using RegimeKey = std::tuple<bool, std::string, bool>;  // mobile, regime, jammed
  std::map<RegimeKey, std::pair<Mean, Mean>> regimes;
  for (const auto& r : rows) {
    std::string regime;
    if (r.density <= 2.0 + 1e-9) regime = "foam";
    else if (r.density >= 4.0 - 1e-9) regime = "fog";
    else continue;
    auto& slot = regimes[{r.mobility_mps > 0.0, regime, r.jammer}];
    if (r.protocol == "qfgeo") slot.first.add(r);
    else if (r.protocol == "qfgeo_unbounded") slot.second.add(r);
  }
  out << "# bounded vs unbounded search (percent change)\n";
  out << "mobility,regime,jammer,goodput_efficiency,reception_ratio,latency_s\n";
  for (const auto& [key, pair] : regimes) {
    const auto& [b, u] = pair;
    if (!b.count || !u.count) continue;
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%+.2f%%,%+.2f%%,%+.2f%%\n",
                  std::get<0>(key) ? "mobile" : "static", std::get<1>(key).c_str(),
                  std::get<2>(key) ? "on" : "off", percent_change(b.get_ge(), u.get_ge()),
                  percent_change(b.get_rr(), u.get_rr()),
                  percent_change(b.get_lat(), u.get_lat()));
    out << buf;
  }
}

}  // namespace qfgeo

#pragma once

// Experiment sweeps over network size, density, flow count, mobility,
// jamming and protocol; aggregation into plot-ready tables.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qfgeo/sim.hpp"

namespace qfgeo {

struct SweepSpec {
  std::vector<std::size_t> sizes{27, 64, 125, 216};
  std::vector<double> densities{1.4142135623730951, 2.0, 3.0, 4.0, 5.0};
  std::vector<std::size_t> flow_counts{1, 3, 7, 10};
  std::vector<double> mobility_mps{0.0, 10.0};
  std::vector<bool> jammer{false, true};
  std::vector<ProtocolKind> protocols{ProtocolKind::qfgeo, ProtocolKind::qfgeo_unbounded,
                                      ProtocolKind::gf, ProtocolKind::mcr};
  std::size_t trials = 4;
  std::uint64_t seed = 1;
  TrialConfig base;  // everything not swept
};

struct SweepCell {
  std::size_t size = 0;
  double density = 0.0;
  std::size_t flows = 0;
  double mobility_mps = 0.0;
  bool jammer = false;
  ProtocolKind protocol = ProtocolKind::qfgeo;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // shared by every protocol in the same scenario and trial
};

std::vector<SweepCell> expand(const SweepSpec& spec);
TrialConfig cell_config(const SweepSpec& spec, const SweepCell& cell);
std::string cell_name(const SweepCell& cell);

struct SweepOutcome {
  std::size_t ran = 0;
  std::size_t skipped = 0;  // result already present
};

using SweepProgress = std::function<void(const SweepCell&, bool skipped)>;

// Runs every cell not already present under out_dir/trials, writing one
// report per trial atomically, then rewrites out_dir/aggregate.csv.
SweepOutcome run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                       unsigned workers = 0, const SweepProgress& progress = {});

struct AggregateRow {
  std::size_t size = 0;
  double density = 0.0;
  std::size_t flows = 0;
  double mobility_mps = 0.0;
  bool jammer = false;
  std::string protocol;
  std::uint64_t seed = 0;
  double goodput_bps = 0.0;
  double reception_ratio = 0.0;
  double latency_s = 0.0;
  double goodput_efficiency = 0.0;
  std::size_t flows_delivered = 0;
};

AggregateRow aggregate_row(const MetricsReport& report);
std::vector<AggregateRow> collect_reports(const std::filesystem::path& trials_dir);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

// Per-figure means (by mobility and jammer, then size, density, protocol)
// followed by the bounded versus unbounded comparison.
void write_summary(std::ostream& out, const std::vector<AggregateRow>& rows);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qfgeo

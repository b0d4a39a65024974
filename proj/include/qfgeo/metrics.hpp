#pragma once

// Goodput, reception ratio, latency and goodput efficiency from an event log.

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfgeo/event_log.hpp"

namespace qfgeo {

struct FlowMetrics {
  FlowId flow = 0;
  std::size_t sent = 0;
  std::size_t received = 0;
  double flow_time_s = 0.0;  // first origination to last delivery; 0 if none delivered
  double mean_latency_s = 0.0;
};

struct MetricsReport {
  double goodput_bps = 0.0;
  double reception_ratio = 0.0;
  double latency_s = 0.0;
  double goodput_efficiency = 0.0;
  std::size_t flows_delivered = 0;
  std::size_t flow_count = 0;
  std::size_t packets_sent = 0;
  std::size_t packets_received = 0;
  double bandwidth_bps = 0.0;
  std::vector<FlowMetrics> per_flow;
  std::vector<std::pair<std::string, std::string>> params_echo;
};

// goodput = received bits / mean flow time over flows with deliveries;
// reception ratio is packet-level over all flows; latency averages
// delivered packets; efficiency = goodput * ratio / (bandwidth * #flows).
MetricsReport compute_metrics(const EventLog& log, std::span<const FlowSpec> flows,
                              double bandwidth_bps);

std::string report_json(const MetricsReport& report, std::string_view provenance = {});
MetricsReport parse_report_json(std::string_view text);

}  // namespace qfgeo

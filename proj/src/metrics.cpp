#include "qfgeo/metrics.hpp"

#include <map>
#include <stdexcept>

#include <json.hpp>

namespace qfgeo {

MetricsReport compute_metrics(const EventLog& log, std::span<const FlowSpec> flows,
                              double bandwidth_bps) {
  MetricsReport r;
  r.bandwidth_bps = bandwidth_bps;
  r.flow_count = flows.size();

  struct Acc {
    std::size_t sent = 0, received = 0;
    std::int64_t first_orig = -1, last_deliver = -1;
    double latency_sum = 0.0;
  };
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < flows.size(); ++i) index[flows[i].id] = i;
  std::vector<Acc> acc(flows.size());
  std::map<std::int64_t, std::int64_t> orig_slot;

  for (const auto& e : log.events) {
    auto fi = index.find(e.flow);
    if (fi == index.end()) continue;
    Acc& a = acc[fi->second];
    if (e.kind == EventKind::originate) {
      ++a.sent;
      orig_slot[e.packet] = e.slot;
      if (a.first_orig < 0 || e.slot < a.first_orig) a.first_orig = e.slot;
    } else if (e.kind == EventKind::deliver) {
      auto o = orig_slot.find(e.packet);
      if (o == orig_slot.end()) continue;
      ++a.received;
      a.last_deliver = std::max(a.last_deliver, e.slot);
      // Deliveries complete at the end of their slot.
      a.latency_sum += static_cast<double>(e.slot + 1 - o->second) * log.slot_s;
    }
  }

  double bits = 0.0, flow_time_sum = 0.0, latency_sum = 0.0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Acc& a = acc[i];
    FlowMetrics fm{flows[i].id, a.sent, a.received, 0.0, 0.0};
    if (a.received > 0) {
      fm.flow_time_s = static_cast<double>(a.last_deliver + 1 - a.first_orig) * log.slot_s;
      fm.mean_latency_s = a.latency_sum / static_cast<double>(a.received);
      ++r.flows_delivered;
      flow_time_sum += fm.flow_time_s;
      bits += static_cast<double>(a.received) * flows[i].packet_bits;
      latency_sum += a.latency_sum;
    }
    r.packets_sent += a.sent;
    r.packets_received += a.received;
    r.per_flow.push_back(fm);
  }

  if (r.flows_delivered > 0) {
    r.goodput_bps = bits / (flow_time_sum / static_cast<double>(r.flows_delivered));
    r.latency_s = latency_sum / static_cast<double>(r.packets_received);
  }
  if (r.packets_sent > 0) {
    r.reception_ratio =
        static_cast<double>(r.packets_received) / static_cast<double>(r.packets_sent);
  }
  if (r.flow_count > 0 && bandwidth_bps > 0.0) {
    r.goodput_efficiency = r.goodput_bps * r.reception_ratio /
                           (bandwidth_bps * static_cast<double>(r.flow_count));
  }
  return r;
}

std::string report_json(const MetricsReport& r, std::string_view provenance) {
  nlohmann::ordered_json j;
  j["goodput_bps"] = r.goodput_bps;
  j["reception_ratio"] = r.reception_ratio;
  j["latency_s"] = r.latency_s;
  j["goodput_efficiency"] = r.goodput_efficiency;
  j["flows_delivered"] = r.flows_delivered;
  j["flow_count"] = r.flow_count;
  j["packets_sent"] = r.packets_sent;
  j["packets_received"] = r.packets_received;
  j["bandwidth_bps"] = r.bandwidth_bps;
  auto& flows = j["per_flow"] = nlohmann::ordered_json::array();
  for (const auto& f : r.per_flow) {
    flows.push_back({{"flow", f.flow},
                     {"sent", f.sent},
                     {"received", f.received},
                     {"flow_time_s", f.flow_time_s},
                     {"mean_latency_s", f.mean_latency_s}});
  }
  auto& params = j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params_echo) params[k] = v;
  if (!provenance.empty()) j["provenance"] = std::string(provenance);
  return j.dump(2) + "\n";
}

MetricsReport parse_report_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  MetricsReport r;
  r.goodput_bps = j.at("goodput_bps").get<double>();
  r.reception_ratio = j.at("reception_ratio").get<double>();
  r.latency_s = j.at("latency_s").get<double>();
  r.goodput_efficiency = j.at("goodput_efficiency").get<double>();
  r.flows_delivered = j.at("flows_delivered").get<std::size_t>();
  r.flow_count = j.at("flow_count").get<std::size_t>();
  r.packets_sent = j.value("packets_sent", std::size_t{0});
  r.packets_received = j.value("packets_received", std::size_t{0});
  r.bandwidth_bps = j.value("bandwidth_bps", 0.0);
  if (j.contains("per_flow")) {
    for (const auto& f : j["per_flow"]) {
      r.per_flow.push_back({f.at("flow").get<FlowId>(), f.at("sent").get<std::size_t>(),
                            f.at("received").get<std::size_t>(),
                            f.at("flow_time_s").get<double>(),
                            f.at("mean_latency_s").get<double>()});
    }
  }
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) {
      r.params_echo.emplace_back(k, v.get<std::string>());
    }
  }
  return r;
}

}  // namespace qfgeo

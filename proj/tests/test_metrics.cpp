#include <doctest.h>

#include <sstream>

#include "qfgeo/metrics.hpp"
#include "qfgeo/sim.hpp"

using namespace qfgeo;

namespace {

Event ev(std::int64_t slot, EventKind kind, std::int64_t flow, std::int64_t packet) {
  Event e;
  e.slot = slot;
  e.kind = kind;
  e.flow = flow;
  e.packet = packet;
  return e;
}

FlowSpec spec(FlowId id, double bits) {
  FlowSpec f;
  f.id = id;
  f.src = 0;
  f.dst = 1;
  f.size_bits = bits;
  return f;
}

}  // namespace

TEST_CASE("metrics from a hand-built log") {
  EventLog log;
  log.slot_s = 0.01;
  // Flow 0: packets 0, 1 originate at slots 0, 1 and arrive at 2, 5.
  // Flow 1: packet 2 originates at 3 and is lost.
  log.events = {ev(0, EventKind::originate, 0, 0), ev(1, EventKind::originate, 0, 1),
                ev(2, EventKind::deliver, 0, 0),   ev(3, EventKind::originate, 1, 2),
                ev(5, EventKind::deliver, 0, 1),   ev(6, EventKind::drop, 1, 2)};
  const std::vector<FlowSpec> flows{spec(0, 16000), spec(1, 8000)};
  const auto r = compute_metrics(log, flows, 1e6);

  CHECK(r.packets_sent == 3);
  CHECK(r.packets_received == 2);
  CHECK(r.flows_delivered == 1);
  CHECK(r.reception_ratio == doctest::Approx(2.0 / 3.0));
  // Flow time covers slots 0..5 inclusive.
  CHECK(r.per_flow[0].flow_time_s == doctest::Approx(0.06));
  CHECK(r.goodput_bps == doctest::Approx(16000 / 0.06));
  // Latencies of 3 and 5 slots.
  CHECK(r.latency_s == doctest::Approx(0.04));
  CHECK(r.goodput_efficiency ==
        doctest::Approx(r.goodput_bps * r.reception_ratio / (1e6 * 2)).epsilon(1e-12));
  CHECK(r.per_flow[1].received == 0);
  CHECK(r.per_flow[1].flow_time_s == 0.0);
}

TEST_CASE("three perfect back-to-back flows reach a third of the bandwidth") {
  EventLog log;
  log.slot_s = 0.003;
  std::vector<FlowSpec> flows;
  std::int64_t packet = 0;
  for (FlowId f = 0; f < 3; ++f) {
    flows.push_back(spec(f, 3e6));
    for (std::int64_t s = 0; s < 375; ++s) {
      log.events.push_back(ev(s, EventKind::originate, f, packet));
      log.events.push_back(ev(s, EventKind::deliver, f, packet));
      ++packet;
    }
  }
  const auto r = compute_metrics(log, flows, 8e6);
  CHECK(r.reception_ratio == 1.0);
  // Each flow moves 8000 bits per 3 ms slot; goodput sums the three flows
  // over their common flow time, and the efficiency divides by the flow count.
  CHECK(r.goodput_bps == doctest::Approx(3 * 8000 / 0.003));
  CHECK(r.goodput_efficiency == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("no receptions and empty logs") {
  EventLog log;
  log.events = {ev(0, EventKind::originate, 0, 0), ev(4, EventKind::drop, 0, 0)};
  const std::vector<FlowSpec> flows{spec(0, 8000)};
  const auto r = compute_metrics(log, flows, 8e6);
  CHECK(r.goodput_bps == 0.0);
  CHECK(r.reception_ratio == 0.0);
  CHECK(r.latency_s == 0.0);
  CHECK(r.goodput_efficiency == 0.0);

  const auto empty = compute_metrics(EventLog{}, flows, 8e6);
  CHECK(empty.packets_sent == 0);
  CHECK(empty.reception_ratio == 0.0);
  const auto none = compute_metrics(EventLog{}, std::vector<FlowSpec>{}, 8e6);
  CHECK(none.goodput_efficiency == 0.0);
}

TEST_CASE("metrics recomputed from the serialized log are bit-identical") {
  TrialConfig cfg;
  cfg.network = {27, 2.0};
  cfg.seed = 8;
  cfg.flow_count = 3;
  cfg.flow_size_bits = 4e5;
  cfg.duration_s = 4.0;
  cfg.arrival_s = 1.0;
  const auto r = run_trial(cfg);

  std::stringstream ss;
  write_event_log_csv(ss, r.log);
  const auto back = read_event_log_csv(ss);
  CHECK(back.slot_s == r.log.slot_s);
  CHECK(back.events == r.log.events);
  const auto again = compute_metrics(back, r.flows, cfg.radio.bandwidth_bps);
  CHECK(again.goodput_bps == r.report.goodput_bps);
  CHECK(again.reception_ratio == r.report.reception_ratio);
  CHECK(again.latency_s == r.report.latency_s);
  CHECK(again.goodput_efficiency == r.report.goodput_efficiency);
}

TEST_CASE("report JSON round-trips") {
  MetricsReport r;
  r.goodput_bps = 1234567.125;
  r.reception_ratio = 0.1 + 0.2;
  r.latency_s = 0.0123;
  r.goodput_efficiency = 1.0 / 3.0;
  r.flows_delivered = 2;
  r.flow_count = 3;
  r.packets_sent = 40;
  r.packets_received = 12;
  r.bandwidth_bps = 8e6;
  r.per_flow = {{0, 20, 12, 0.5, 0.01}};
  r.params_echo = {{"protocol", "qfgeo"}, {"seed", "4"}};
  const auto text = report_json(r, "qfgeo 0.1.0 config=abc seed=4");
  CHECK(text.find("\"provenance\": \"qfgeo 0.1.0 config=abc seed=4\"") != std::string::npos);
  const auto back = parse_report_json(text);
  CHECK(back.goodput_bps == r.goodput_bps);
  CHECK(back.reception_ratio == r.reception_ratio);
  CHECK(back.goodput_efficiency == r.goodput_efficiency);
  CHECK(back.flow_count == 3);
  REQUIRE(back.per_flow.size() == 1);
  CHECK(back.per_flow[0].received == 12);
  CHECK(back.params_echo.size() == 2);
  CHECK(report_json(back, "qfgeo 0.1.0 config=abc seed=4") == text);
}

TEST_CASE("trace output lists routing decisions") {
  EventLog log;
  Event f = ev(7, EventKind::forward, 1, 2);
  f.node = 3;
  f.target = 4;
  f.ell = 1.5;
  log.events = {ev(6, EventKind::transmit, 1, 2), f};
  std::stringstream ss;
  write_trace_csv(ss, log);
  const auto text = ss.str();
  CHECK(text.rfind("time_slot,packet,flow,node,action,target,ell,retx\n", 0) == 0);
  CHECK(text.find("7,2,1,3,forward,4,") != std::string::npos);
  CHECK(text.find("transmit") == std::string::npos);
}

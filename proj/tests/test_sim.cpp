#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "qfgeo/sim.hpp"

using namespace qfgeo;

namespace {

TrialConfig short_trial(ProtocolKind protocol, std::uint64_t seed) {
  TrialConfig cfg;
  cfg.network = {27, 2.0};
  cfg.seed = seed;
  cfg.flow_count = 3;
  cfg.flow_size_bits = 4e5;
  cfg.duration_s = 4.0;
  cfg.arrival_s = 1.0;
  cfg.protocol = protocol;
  return cfg;
}

FlowSpec flow(FlowId id, NodeId src, NodeId dst, double bits) {
  FlowSpec f;
  f.id = id;
  f.src = src;
  f.dst = dst;
  f.size_bits = bits;
  return f;
}

std::size_t count(const EventLog& log, EventKind kind) {
  std::size_t n = 0;
  for (const auto& e : log.events) n += e.kind == kind;
  return n;
}

}  // namespace

TEST_CASE("move_nodes example") {
  RandomWaypoint rw(1, 10.0, 0.01, 1);
  rw.set_waypoint(0, {3, 4});
  std::vector<Point> pos{{0, 0}};
  move_nodes(pos, rw, 1.0);
  CHECK(pos[0].x == doctest::Approx(0.006).epsilon(1e-12));
  CHECK(pos[0].y == doctest::Approx(0.008).epsilon(1e-12));
}

TEST_CASE("zero speed leaves nodes in place") {
  RandomWaypoint rw(5, 10.0, 0.0, 1);
  std::vector<Point> pos{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  const auto before = pos;
  for (int i = 0; i < 100; ++i) move_nodes(pos, rw, 0.003);
  CHECK(pos == before);
}

TEST_CASE("waypoint motion is continuous and stays in the square") {
  const double side = 4.0, speed = 2.0, dt = 0.003;
  RandomWaypoint rw(20, side, speed, 99);
  std::vector<Point> pos(20, Point{2, 2});
  for (int step = 0; step < 5000; ++step) {
    const auto before = pos;
    move_nodes(pos, rw, dt);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      REQUIRE(distance(before[i], pos[i]) <= speed * dt + 1e-12);
      REQUIRE(pos[i].x >= 0.0);
      REQUIRE(pos[i].x <= side);
      REQUIRE(pos[i].y >= 0.0);
      REQUIRE(pos[i].y <= side);
    }
  }
}

TEST_CASE("jammer_effect examples") {
  JammerDisk off;
  CHECK_FALSE(jammer_effect({0, 0}, 0, off));
  const JammerDisk on{true, {0, 0}, 1.32, 0};
  CHECK(jammer_effect({0.3, 0.2}, 0, on));
  CHECK_FALSE(jammer_effect({0.3, 0.2}, 1, on));
  CHECK(jammer_effect({1.0, 0.0}, 0, on));
  CHECK_FALSE(jammer_effect({1.5, 0.0}, 0, on));
  CHECK(jammer_effect({1.32, 0.0}, 0, on));
}

TEST_CASE("configuration checks") {
  TrialConfig ok;
  CHECK_NOTHROW(validate(ok));

  auto big = ok;
  big.packet_bits = 20000;
  CHECK_THROWS_AS(validate(big), InvariantViolation);
  CHECK_THROWS_AS(Simulator{big}, InvariantViolation);

  auto late = ok;
  late.arrival_s = 40.0;
  CHECK_THROWS_AS(validate(late), ConfigError);

  auto loop = ok;
  loop.flows = {flow(0, 3, 3, 1e5)};
  CHECK_THROWS_AS(validate(loop), ConfigError);

  auto eps = ok;
  eps.params.epsilon = 1.5;
  CHECK_THROWS_AS(validate(eps), ConfigError);

  auto radios = ok;
  radios.radio.radios = 3;
  CHECK_THROWS_AS(validate(radios), ConfigError);

  auto jam = ok;
  jam.jammer.enabled = true;
  jam.jammer.channel = 2;
  CHECK_THROWS_AS(validate(jam), ConfigError);
}

TEST_CASE("default capacity requirement is one packet per slot over both channels") {
  const TrialConfig cfg;
  CHECK(default_capacity_requirement(cfg) ==
        doctest::Approx(8000.0 / 0.003 / (2 * 3.5e6)).epsilon(1e-12));
}

TEST_CASE("a one-hop flow is fully delivered at one packet per slot") {
  for (auto protocol : {ProtocolKind::qfgeo, ProtocolKind::gf, ProtocolKind::mcr}) {
    TrialConfig cfg;
    cfg.positions = {{0, 0}, {0.5, 0}};
    cfg.flows = {flow(0, 0, 1, 3e6)};
    cfg.duration_s = 8.0;
    cfg.protocol = protocol;
    const auto r = run_trial(cfg);
    CHECK(r.report.reception_ratio == 1.0);
    CHECK(r.report.packets_sent == 375);
    CHECK(r.report.goodput_efficiency == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  }
}

TEST_CASE("no flows gives an empty report") {
  TrialConfig cfg = short_trial(ProtocolKind::qfgeo, 3);
  cfg.flow_count = 0;
  const auto r = run_trial(cfg);
  CHECK(r.report.flow_count == 0);
  CHECK(r.report.packets_sent == 0);
  CHECK(r.report.goodput_bps == 0.0);
  CHECK(r.report.goodput_efficiency == 0.0);
  CHECK(count(r.log, EventKind::originate) == 0);
}

TEST_CASE("an isolated destination is never reached") {
  for (auto protocol : {ProtocolKind::qfgeo, ProtocolKind::qfgeo_unbounded, ProtocolKind::gf,
                        ProtocolKind::mcr}) {
    TrialConfig cfg;
    cfg.positions = {{0, 0}, {0.5, 0}, {5, 5}};
    cfg.flows = {flow(0, 0, 2, 8e4)};
    cfg.duration_s = 6.0;
    cfg.protocol = protocol;
    const auto r = run_trial(cfg);
    CHECK(r.report.reception_ratio == 0.0);
    CHECK(r.report.packets_sent == 10);
    CHECK(count(r.log, EventKind::drop) == 10);
  }
}

TEST_CASE("hidden terminals collide at a shared receiver") {
  TrialConfig cfg;
  cfg.positions = {{0, 0}, {2, 0}, {1, 0}};
  cfg.flows = {flow(0, 0, 2, 2e5), flow(1, 1, 2, 2e5)};
  cfg.duration_s = 7.0;
  cfg.protocol = ProtocolKind::gf;
  const auto r = run_trial(cfg);
  CHECK(count(r.log, EventKind::collision) > 0);
  // Backoff after failures lets most packets through; some exhaust their retries.
  CHECK(r.report.reception_ratio > 0.5);
  for (const auto& e : r.log.events) {
    if (e.kind == EventKind::collision) CHECK(e.node == 2);
  }
}

TEST_CASE("trials are reproducible from the seed") {
  for (auto protocol : {ProtocolKind::qfgeo, ProtocolKind::gf, ProtocolKind::mcr}) {
    auto cfg = short_trial(protocol, 11);
    cfg.mobility_mps = 10.0;
    const auto a = run_trial(cfg);
    const auto b = run_trial(cfg);
    CHECK(a.log.events == b.log.events);
    CHECK(report_json(a.report) == report_json(b.report));
    cfg.seed = 12;
    CHECK_FALSE(run_trial(cfg).log.events == a.log.events);
  }
}

TEST_CASE("every protocol shares the same network and flows for a seed") {
  const auto q = run_trial(short_trial(ProtocolKind::qfgeo, 5));
  const auto g = run_trial(short_trial(ProtocolKind::gf, 5));
  REQUIRE(q.flows.size() == g.flows.size());
  for (std::size_t i = 0; i < q.flows.size(); ++i) {
    CHECK(q.flows[i].src == g.flows[i].src);
    CHECK(q.flows[i].dst == g.flows[i].dst);
  }
}

TEST_CASE("beacons keep neighbor tables in step with the static topology") {
  auto cfg = short_trial(ProtocolKind::qfgeo, 21);
  Simulator sim(cfg);
  const auto hello_slots = static_cast<std::int64_t>(std::ceil(2 * cfg.hello_period_s / cfg.slot_s));
  while (sim.slot() <= hello_slots) sim.step_slot();
  const NetworkGraph g(std::vector<Point>(sim.positions().begin(), sim.positions().end()));
  for (NodeId v = 0; v < g.size(); ++v) {
    std::set<NodeId> table;
    for (const auto& [u, e] : sim.node(v).neighbors) table.insert(u);
    const auto nb = g.neighbors(v);
    CHECK(table == std::set<NodeId>(nb.begin(), nb.end()));
  }
}

TEST_CASE("event log invariants") {
  std::vector<TrialConfig> configs;
  for (auto protocol : {ProtocolKind::qfgeo, ProtocolKind::qfgeo_unbounded, ProtocolKind::gf,
                        ProtocolKind::mcr}) {
    configs.push_back(short_trial(protocol, 31));
    auto harsh = short_trial(protocol, 32);
    harsh.mobility_mps = 10.0;
    harsh.jammer.enabled = true;
    harsh.network = {64, 3.0};
    harsh.flow_count = 7;
    configs.push_back(harsh);
  }
  for (const auto& cfg : configs) {
    Simulator sim(cfg);
    while (!sim.done()) sim.step_slot();
    const auto& log = sim.log();

    std::set<std::tuple<std::int64_t, std::int64_t, int>> sends;  // slot, node, channel
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, int>> tx;
    std::map<std::int64_t, int> terminal;
    std::size_t originated = 0;
    for (const auto& e : log.events) {
      switch (e.kind) {
        case EventKind::transmit:
          CHECK(sends.insert({e.slot, e.node, e.channel}).second);
          tx.insert({e.slot, e.packet, e.node, e.target, e.channel});
          break;
        case EventKind::receive:
        case EventKind::collision:
        case EventKind::half_duplex:
        case EventKind::jammed:
        case EventKind::link_lost:
          CHECK(tx.count({e.slot, e.packet, e.target, e.node, e.channel}) == 1);
          break;
        case EventKind::originate:
          ++originated;
          break;
        case EventKind::deliver:
        case EventKind::drop:
          CHECK(++terminal[e.packet] == 1);
          break;
        default:
          break;
      }
    }
    // Every packet is delivered, dropped or still queued.
    CHECK(originated == terminal.size() + sim.queued_packets());
    CHECK(originated > 0);
  }
}

TEST_CASE("carrier sense keeps static nodes from half-duplex losses") {
  const auto r = run_trial(short_trial(ProtocolKind::qfgeo, 41));
  CHECK(count(r.log, EventKind::half_duplex) == 0);
  CHECK(count(r.log, EventKind::link_lost) == 0);
}

TEST_CASE("jammed channel loses packets only inside the disk") {
  TrialConfig cfg;
  cfg.positions = {{0, 0}, {0.5, 0}, {4, 4}};
  cfg.flows = {flow(0, 0, 1, 4e5)};
  cfg.jammer.enabled = true;
  cfg.jammer.position = Point{0, 0};
  cfg.duration_s = 7.0;
  cfg.protocol = ProtocolKind::gf;
  const auto r = run_trial(cfg);
  // Channel 0 always senses busy there, so the pair uses channel 1 only.
  CHECK(count(r.log, EventKind::jammed) == 0);
  for (const auto& e : r.log.events) {
    if (e.kind == EventKind::transmit) CHECK(e.channel == 1);
  }
  CHECK(r.report.reception_ratio == 1.0);
}

#pragma once

// Slotted discrete-event mesh simulator. Each node has two radios with one
// data channel each and a shared control channel for Hello beacons. Links
// follow the unit-disk rule with equal transmission and interference radii;
// an optional jammer blocks one data channel inside a disk.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qfgeo/event_log.hpp"
#include "qfgeo/metrics.hpp"
#include "qfgeo/protocol.hpp"
#include "qfgeo/random.hpp"

namespace qfgeo {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration that parses but breaks a modelling invariant.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ProtocolKind { qfgeo, qfgeo_unbounded, gf, mcr };

const char* to_string(ProtocolKind k);
ProtocolKind parse_protocol(std::string_view name);

struct RadioPlan {
  double radius_km = 1.0;  // transmission and interference radius (the unit R)
  int radios = 2;          // one data channel per radio
  int data_channels = 2;
  double data_rate_bps = 3.5e6;
  double control_rate_bps = 1e6;
  double ack_bits = 112;
  double bandwidth_bps = 8e6;  // node total across data and control channels
};

struct JammerConfig {
  bool enabled = false;
  std::optional<Point> position;  // R units; centre of the deployment square by default
  double power_db = 3.0;          // informational; the radius carries the effect
  double radius_km = 1.32;
  int channel = 0;
};

struct TrialConfig {
  DensitySpec network{64, 2.0};
  std::uint64_t seed = 1;
  std::vector<Point> positions;  // explicit layout in R units; overrides generation

  std::size_t flow_count = 1;
  std::vector<FlowSpec> flows;  // explicit flows; otherwise drawn from the seed
  double flow_size_bits = 3e6;
  double packet_bits = 8000;

  double mobility_mps = 0.0;
  JammerConfig jammer;

  double duration_s = 30.0;
  double slot_s = 0.003;
  double hello_period_s = 0.2;
  double arrival_s = 5.0;
  double neighbor_timeout_s = 0.6;
  int max_backoff_slots = 3;
  int theta_window_slots = 50;

  RadioPlan radio;
  ProtocolKind protocol = ProtocolKind::qfgeo;
  ProtocolParams params;

  bool log_beacons = true;
};

// Throws ConfigError or InvariantViolation (slot budget).
void validate(const TrialConfig& cfg);

// C(fl): one packet per slot over the node's aggregate data capacity.
double default_capacity_requirement(const TrialConfig& cfg);

struct JammerDisk {
  bool enabled = false;
  Point center;
  double radius = 1.32;  // R units
  int channel = 0;
};

bool jammer_effect(Point receiver, int channel, const JammerDisk& jammer);

// Random waypoint mobility in a square, zero pause time.
class RandomWaypoint {
 public:
  RandomWaypoint(std::size_t nodes, double side, double speed, std::uint64_t seed);

  void set_waypoint(NodeId id, Point p) { waypoints_.at(id) = p; }
  Point waypoint(NodeId id) const { return waypoints_.at(id); }
  double speed() const { return speed_; }

  // Advances every node by speed * dt along its bearing, continuing toward
  // a fresh waypoint when one is reached mid-step.
  void move(std::span<Point> positions, double dt);

 private:
  double side_;
  double speed_;  // R units per second
  Rng rng_;
  std::vector<Point> waypoints_;
};

void move_nodes(std::span<Point> positions, RandomWaypoint& model, double dt);

class Simulator {
 public:
  explicit Simulator(const TrialConfig& cfg);

  void step_slot();
  bool done() const { return slot_ >= total_slots_; }
  std::int64_t slot() const { return slot_; }
  std::int64_t total_slots() const { return total_slots_; }

  const TrialConfig& config() const { return cfg_; }
  const EventLog& log() const { return log_; }
  const std::vector<FlowSpec>& flows() const { return flows_; }
  std::span<const Point> positions() const { return positions_; }
  const NodeState& node(NodeId id) const { return nodes_.at(id).state; }
  std::size_t queued_packets() const;

 private:
  struct Queued {
    Packet packet;
    NodeId next_hop = kNoNode;
    bool backtrack = false;
    std::int64_t ready_slot = 0;
  };

  struct NodeRuntime {
    NodeState state;
    std::map<FlowId, std::deque<Queued>> queues;
    FlowId rr_next = 0;
    int backoff = 0;
    double next_beacon_s = 0.0;
    std::vector<std::uint8_t> tx_hist;     // [slot % window][channel]
    std::vector<std::uint8_t> sense_hist;
    int tx_sum = 0;
    int sense_sum = 0;
  };

  struct Transmission {
    NodeId sender;
    NodeId receiver;
    int channel;
    FlowId flow;
    PacketId packet;
    bool backtrack;
  };

  struct InFlight {
    NodeId sender;
    int channel;
    Queued entry;
  };

  void init_flows();
  void run_beacons(double t);
  void prune_neighbors(double t);
  void generate_traffic();
  void setup_mcr(const FlowSpec& f);
  std::vector<Transmission> contend();
  void resolve(const std::vector<Transmission>& txs);
  void update_activity(const std::vector<Transmission>& txs);

  void handle_at(NodeId v, Packet p, std::int64_t ready_slot);
  void apply(NodeId v, Packet p, const ForwardDecision& d, std::int64_t ready_slot);
  void retransmissions_exhausted(NodeId v, Queued entry);
  bool sensed_busy(NodeId v, int channel, const std::vector<Transmission>& txs) const;
  double theta_of(const NodeRuntime& rt) const;
  void log(Event e);

  TrialConfig cfg_;
  double radius_ = 1.0;  // always 1 in R units
  double speed_ = 0.0;   // R units per second
  JammerDisk jammer_;
  std::int64_t total_slots_ = 0;
  std::int64_t arrival_slot_ = 0;
  std::int64_t slot_ = 0;

  std::vector<Point> positions_;
  std::vector<NodeRuntime> nodes_;
  std::vector<FlowSpec> flows_;
  std::map<FlowId, std::size_t> generated_;
  std::map<FlowId, std::optional<std::vector<NodeId>>> mcr_routes_;
  std::map<FlowId, std::int64_t> flow_ready_slot_;
  std::vector<InFlight> in_flight_;  // parallel to this slot's transmissions
  std::optional<RandomWaypoint> mobility_;
  Rng rng_;
  PacketId next_packet_ = 0;
  EventLog log_;
};

struct TrialResult {
  EventLog log;
  MetricsReport report;
  std::vector<FlowSpec> flows;
};

TrialResult run_trial(const TrialConfig& cfg);

}  // namespace qfgeo

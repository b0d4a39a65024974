#pragma once

// Per-packet forwarding logic for QF-Geo (bounded depth-first search with
// capacity-aware relay selection and per-flow forwarder memory), greedy
// forwarding, and maximum-capacity source routing. Everything here is a
// transition function over a packet and the state of the node holding it;
// the simulator and the lossless router both drive it.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "qfgeo/ellipse_model.hpp"
#include "qfgeo/geometry.hpp"

namespace qfgeo {

using PacketId = std::uint64_t;
using FlowId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Packets whose visited list outgrows the header are dropped.
inline constexpr std::size_t kHeaderCapacity = 64;

struct Packet {
  PacketId id = 0;
  FlowId flow = 0;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  Point dst_pos;       // from the location service, refreshed per hop
  Point focus;         // other focus of the search ellipse (src, or a re-planning relay)
  double ell = 0.0;    // 0 until the source sets it
  double capacity_req = 0.0;  // C(fl)
  std::uint32_t payload_bits = 8000;
  std::set<NodeId> visited;
  std::map<NodeId, NodeId> parent_of;

  // Link-layer header fields.
  NodeId last_hop = kNoNode;
  bool backtracked = false;

  // Source route (MCR only).
  std::vector<NodeId> route;
  std::size_t route_pos = 0;

  bool ellipse_set() const { return ell > 0.0; }
};

struct NeighborEntry {
  Point position;
  double theta = 1.0;
  double last_heard_s = 0.0;
};

struct NodeState {
  NodeId id = kNoNode;
  Point position;
  double theta = 1.0;
  std::map<NodeId, NeighborEntry> neighbors;
  std::map<FlowId, NodeId> last_forwarder;            // q(fl, v)
  std::map<PacketId, std::set<NodeId>> backtrack_sets;  // BL(p, v)
  std::map<PacketId, std::set<NodeId>> failed_links;  // next hops that exhausted retransmissions
  std::map<PacketId, int> retx;                       // RETX(p, v)
};

enum class ThetaMode { linear, literal };

struct ProtocolParams {
  double epsilon = 0.1;
  int retx_max = 3;
  double c_min = 0.2;
  EllipseModel model;
  double density = 2.0;  // configured network density rho
  bool bounded = true;   // false: unbounded search (QF-Geo-A)
  ThetaMode theta_mode = ThetaMode::linear;
};

enum class Action { forward, backtrack, deliver, drop };

enum class DropReason {
  none,
  search_exhausted,  // back at the source with nothing left to explore
  no_progress,       // greedy forwarding hit a local minimum
  header_overflow,
  retx_exhausted,
  no_route,
};

struct ForwardDecision {
  Action action = Action::drop;
  NodeId target = kNoNode;
  DropReason reason = DropReason::none;
  bool used_memory = false;  // q(fl, v) was reused
  bool explored = false;     // the epsilon branch forced a fresh greedy choice

  static ForwardDecision forward(NodeId to) { return {Action::forward, to}; }
  static ForwardDecision backtrack(NodeId to) { return {Action::backtrack, to}; }
  static ForwardDecision deliver() { return {Action::deliver}; }
  static ForwardDecision drop(DropReason why) { return {Action::drop, kNoNode, why}; }
};

const char* to_string(Action a);
const char* to_string(DropReason r);

// Neighbors of v (per its table) inside the packet's ellipse.
std::vector<NodeId> ellipse_neighbors(const Packet& p, const NodeState& v);

// Algorithm entry point at node v. Sets (or re-plans) the ellipse at the
// source of a fresh packet, or at any holder whose retransmission count
// exceeds retx_max, then forwards. phi is v's estimate of the fraction of
// capacity-rich nodes.
ForwardDecision qfgeo_on_packet(Packet& p, NodeState& v, const ProtocolParams& params,
                                double phi, double rnd);

// One forwarding step: capacity-qualified candidates first (reusing the
// flow's last forwarder with probability 1 - epsilon), then any unvisited
// in-ellipse neighbor, else backtrack to the traversal parent.
ForwardDecision qfgeo_forward(Packet& p, NodeState& v, const ProtocolParams& params,
                              double rnd);

// Called at the parent when `from` hands a packet back: records `from` in
// BL(p, parent) and stops preferring it for the flow.
void qfgeo_on_backtrack(const Packet& p, NodeState& parent, NodeId from);

// Residual capacity from the send probability d_v and interference
// estimate i_v. Linear: max(1 - (d + i), 0). Literal: max(1 - (d + e^i), 0).
double estimate_theta(double d_v, double i_v, ThetaMode mode);

// Fraction of thetas >= c_min; 1 when there are none.
double estimate_phi(std::span<const double> neighbor_thetas, double c_min);
double estimate_phi(const NodeState& v, double c_min);

// Forward to the strictly-closer neighbor nearest the destination; drop at
// a local minimum.
ForwardDecision gf_forward(const Packet& p, const NodeState& v);

// Widest path: maximize the smallest relay capacity (endpoints excluded),
// then fewest hops, then lexicographically smallest node sequence.
struct WidestPath {
  std::vector<NodeId> nodes;
  double bottleneck = 0.0;  // +inf for a direct link
};

std::optional<WidestPath> widest_path(std::span<const std::vector<NodeId>> adjacency,
                                      std::span<const double> capacity, NodeId src,
                                      NodeId dst);

struct LocalView {
  Point position;
  double theta = 0.0;
  std::vector<NodeId> neighbors;
};

// Answers a state-collection query for a node; empty if it does not respond.
using LocalViewCollector = std::function<std::optional<LocalView>(NodeId)>;

struct McrRoute {
  WidestPath path;
  double ell = 0.0;
  std::size_t explored_nodes = 0;
  // Control-channel transmissions spent: one query rebroadcast per reached
  // node plus one response relay per tree hop back to the source.
  std::size_t control_transmissions = 0;
};

// Floods a query through the ellipse predicted for (rho, src-dst distance),
// then picks the widest path over the collected subgraph. Empty when the
// destination is not reached inside the region.
std::optional<McrRoute> mcr_setup(NodeId src, NodeId dst, const EllipseModel& model,
                                  double rho, const LocalViewCollector& collect);

}  // namespace qfgeo

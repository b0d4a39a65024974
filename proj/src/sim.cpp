#include "qfgeo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <string>

namespace qfgeo {

const char* to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::qfgeo: return "qfgeo";
    case ProtocolKind::qfgeo_unbounded: return "qfgeo_unbounded";
    case ProtocolKind::gf: return "gf";
    case ProtocolKind::mcr: return "mcr";
  }
  return "?";
}

ProtocolKind parse_protocol(std::string_view name) {
  if (name == "qfgeo") return ProtocolKind::qfgeo;
  if (name == "qfgeo_unbounded" || name == "qfgeo-a") return ProtocolKind::qfgeo_unbounded;
  if (name == "gf") return ProtocolKind::gf;
  if (name == "mcr") return ProtocolKind::mcr;
  throw ConfigError("unknown protocol '" + std::string(name) + "'");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::size_t node_count(const TrialConfig& cfg) {
  return cfg.positions.empty() ? cfg.network.n : cfg.positions.size();
}

std::int64_t slots_for(double seconds, double slot_s) {
  return static_cast<std::int64_t>(std::ceil(seconds / slot_s - 1e-9));
}

double deployment_side(const TrialConfig& cfg) {
  double side = cfg.network.rho > 0.0 && cfg.network.n > 0 ? cfg.network.side() : 0.0;
  for (const auto& p : cfg.positions) side = std::max({side, p.x, p.y});
  return side;
}

std::vector<std::size_t> reachable_from(const NetworkGraph& g, NodeId src) {
  std::vector<std::size_t> seen(g.size(), 0);
  std::deque<NodeId> frontier{src};
  seen[src] = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId w : g.neighbors(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        frontier.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

void validate(const TrialConfig& cfg) {
  const std::size_t n = node_count(cfg);
  require(n >= 2, "network needs at least 2 nodes");
  require(cfg.positions.empty() ? cfg.network.rho > 0.0 : true, "density must be positive");
  for (const auto& p : cfg.positions) {
    require(std::isfinite(p.x) && std::isfinite(p.y), "positions must be finite");
  }
  require(cfg.slot_s > 0.0, "slot must be positive");
  require(cfg.arrival_s >= 0.0, "arrival time must be non-negative");
  require(cfg.duration_s > cfg.arrival_s, "duration must exceed the flow arrival time");
  require(cfg.hello_period_s > 0.0, "hello period must be positive");
  require(cfg.neighbor_timeout_s > 0.0, "neighbor timeout must be positive");
  require(cfg.max_backoff_slots >= 0, "backoff must be non-negative");
  require(cfg.theta_window_slots >= 1, "theta window must be at least one slot");
  require(cfg.mobility_mps >= 0.0, "mobility speed must be non-negative");
  require(cfg.flow_size_bits > 0.0 && cfg.packet_bits > 0.0, "flow and packet sizes must be positive");
  require(cfg.radio.radius_km > 0.0, "radio radius must be positive");
  require(cfg.radio.data_channels >= 1, "at least one data channel required");
  require(cfg.radio.radios == cfg.radio.data_channels,
          "each radio carries exactly one data channel");
  require(cfg.radio.data_rate_bps > 0.0 && cfg.radio.bandwidth_bps > 0.0,
          "rates must be positive");
  require(cfg.params.epsilon >= 0.0 && cfg.params.epsilon <= 1.0, "epsilon must lie in [0,1]");
  require(cfg.params.retx_max >= 0, "retx_max must be non-negative");
  require(cfg.params.c_min >= 0.0 && cfg.params.c_min <= 1.0, "c_min must lie in [0,1]");
  if (cfg.jammer.enabled) {
    require(cfg.jammer.radius_km > 0.0, "jammer radius must be positive");
    require(cfg.jammer.channel >= 0 && cfg.jammer.channel < cfg.radio.data_channels,
            "jammer channel out of range");
  }
  for (const auto& f : cfg.flows) {
    require(f.src < n && f.dst < n, "flow endpoint out of range");
    require(f.src != f.dst, "flow endpoints must differ");
    require(f.size_bits > 0.0 && f.packet_bits > 0.0, "flow sizes must be positive");
  }

  const double budget = cfg.radio.data_rate_bps * cfg.slot_s;
  if (cfg.packet_bits + cfg.radio.ack_bits > budget) {
    throw InvariantViolation("a data packet plus acknowledgment (" +
                             std::to_string(cfg.packet_bits + cfg.radio.ack_bits) +
                             " bits) does not fit one slot (" + std::to_string(budget) +
                             " bits)");
  }
  for (const auto& f : cfg.flows) {
    if (f.packet_bits + cfg.radio.ack_bits > budget) {
      throw InvariantViolation("flow packet plus acknowledgment does not fit one slot");
    }
  }
}

double default_capacity_requirement(const TrialConfig& cfg) {
  const double offered = cfg.packet_bits / cfg.slot_s;
  return offered / (cfg.radio.data_channels * cfg.radio.data_rate_bps);
}

bool jammer_effect(Point receiver, int channel, const JammerDisk& jammer) {
  return jammer.enabled && channel == jammer.channel &&
         distance(receiver, jammer.center) <= jammer.radius;
}

RandomWaypoint::RandomWaypoint(std::size_t nodes, double side, double speed,
                               std::uint64_t seed)
    : side_(side), speed_(speed), rng_(seed), waypoints_(nodes) {
  for (auto& w : waypoints_) w = {uniform(rng_, 0.0, side_), uniform(rng_, 0.0, side_)};
}

void RandomWaypoint::move(std::span<Point> positions, double dt) {
  if (speed_ <= 0.0 || dt <= 0.0) return;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Point& p = positions[i];
    double left = speed_ * dt;
    // Bounded so a degenerate square cannot spin forever.
    for (int leg = 0; leg < 64 && left > 0.0; ++leg) {
      Point& w = waypoints_[i];
      const double d = distance(p, w);
      if (d <= left) {
        p = w;
        left -= d;
        w = {uniform(rng_, 0.0, side_), uniform(rng_, 0.0, side_)};
      } else {
        const double f = left / d;
        p = {p.x + (w.x - p.x) * f, p.y + (w.y - p.y) * f};
        left = 0.0;
      }
    }
    p.x = std::clamp(p.x, 0.0, side_);
    p.y = std::clamp(p.y, 0.0, side_);
  }
}

void move_nodes(std::span<Point> positions, RandomWaypoint& model, double dt) {
  model.move(positions, dt);
}

Simulator::Simulator(const TrialConfig& cfg) : cfg_(cfg), rng_(derive_seed(cfg.seed, 5)) {
  validate(cfg_);
  if (cfg_.protocol == ProtocolKind::qfgeo_unbounded) cfg_.params.bounded = false;
  cfg_.params.density = cfg_.network.rho;

  const double r_km = cfg_.radio.radius_km;
  if (cfg_.positions.empty()) {
    const auto g = generate_network(cfg_.network, derive_seed(cfg_.seed, 1));
    positions_.assign(g.positions().begin(), g.positions().end());
  } else {
    positions_ = cfg_.positions;
  }
  const double side = deployment_side(cfg_);

  speed_ = cfg_.mobility_mps / 1000.0 / r_km;
  if (speed_ > 0.0) {
    mobility_.emplace(positions_.size(), side, speed_, derive_seed(cfg_.seed, 3));
  }

  jammer_.enabled = cfg_.jammer.enabled;
  jammer_.center = cfg_.jammer.position.value_or(Point{side / 2.0, side / 2.0});
  jammer_.radius = cfg_.jammer.radius_km / r_km;
  jammer_.channel = cfg_.jammer.channel;

  total_slots_ = slots_for(cfg_.duration_s, cfg_.slot_s);
  arrival_slot_ = slots_for(cfg_.arrival_s, cfg_.slot_s);
  log_.slot_s = cfg_.slot_s;

  Rng beacon_rng(derive_seed(cfg_.seed, 4));
  const std::size_t window =
      static_cast<std::size_t>(cfg_.theta_window_slots) * cfg_.radio.data_channels;
  nodes_.resize(positions_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& rt = nodes_[i];
    rt.state.id = static_cast<NodeId>(i);
    rt.state.position = positions_[i];
    rt.next_beacon_s = uniform(beacon_rng, 0.0, cfg_.hello_period_s);
    rt.tx_hist.assign(window, 0);
    rt.sense_hist.assign(window, 0);
  }

  init_flows();
}

void Simulator::init_flows() {
  const double c_req = default_capacity_requirement(cfg_);
  if (!cfg_.flows.empty()) {
    flows_ = cfg_.flows;
    for (auto& f : flows_) {
      if (f.capacity_req <= 0.0) f.capacity_req = c_req;
    }
    return;
  }
  // Endpoints are drawn uniformly; connected pairs are preferred so that
  // a trial measures routing rather than partitioning.
  const NetworkGraph g(positions_);
  Rng rng(derive_seed(cfg_.seed, 2));
  const auto n = static_cast<std::uint64_t>(positions_.size());
  for (std::size_t k = 0; k < cfg_.flow_count; ++k) {
    NodeId src = 0, dst = 1;
    for (int attempt = 0; attempt < 64; ++attempt) {
      src = static_cast<NodeId>(uniform_index(rng, n));
      dst = static_cast<NodeId>(uniform_index(rng, n - 1));
      if (dst >= src) ++dst;
      if (reachable_from(g, src)[dst]) break;
    }
    FlowSpec f;
    f.id = static_cast<FlowId>(k);
    f.src = src;
    f.dst = dst;
    f.size_bits = cfg_.flow_size_bits;
    f.packet_bits = cfg_.packet_bits;
    f.capacity_req = c_req;
    flows_.push_back(f);
  }
}

std::size_t Simulator::queued_packets() const {
  std::size_t total = 0;
  for (const auto& rt : nodes_) {
    for (const auto& [flow, q] : rt.queues) total += q.size();
  }
  return total;
}

void Simulator::log(Event e) {
  e.slot = slot_;
  log_.events.push_back(e);
}

double Simulator::theta_of(const NodeRuntime& rt) const {
  const double span = static_cast<double>(rt.tx_hist.size());
  return estimate_theta(rt.tx_sum / span, rt.sense_sum / span, cfg_.params.theta_mode);
}

void Simulator::run_beacons(double t) {
  for (auto& rt : nodes_) {
    if (rt.next_beacon_s > t) continue;
    rt.next_beacon_s += cfg_.hello_period_s;
    const NodeId v = rt.state.id;
    std::int64_t reached = 0;
    for (auto& other : nodes_) {
      if (other.state.id == v || distance(positions_[v], positions_[other.state.id]) > radius_) {
        continue;
      }
      other.state.neighbors[v] = NeighborEntry{positions_[v], rt.state.theta, t};
      ++reached;
    }
    if (cfg_.log_beacons) {
      Event e;
      e.kind = EventKind::beacon;
      e.node = v;
      e.aux = reached;
      log(e);
    }
  }
}

void Simulator::prune_neighbors(double t) {
  for (auto& rt : nodes_) {
    std::erase_if(rt.state.neighbors, [&](const auto& kv) {
      return t - kv.second.last_heard_s > cfg_.neighbor_timeout_s;
    });
  }
}

void Simulator::setup_mcr(const FlowSpec& f) {
  LocalViewCollector collect = [&](NodeId id) -> std::optional<LocalView> {
    const auto& st = nodes_.at(id).state;
    LocalView view{positions_[id], st.theta, {}};
    for (const auto& [u, e] : st.neighbors) view.neighbors.push_back(u);
    return view;
  };
  auto route = mcr_setup(f.src, f.dst, cfg_.params.model, cfg_.params.density, collect);
  Event e;
  e.flow = f.id;
  e.node = f.src;
  e.target = f.dst;
  if (route) {
    // Query and response packets serialize on the control channel, one per slot.
    const auto cost = static_cast<std::int64_t>(route->control_transmissions);
    mcr_routes_[f.id] = route->path.nodes;
    flow_ready_slot_[f.id] = slot_ + cost;
    e.kind = EventKind::route_setup;
    e.ell = route->ell;
    e.aux = cost;
  } else {
    mcr_routes_[f.id] = std::nullopt;
    flow_ready_slot_[f.id] = slot_;
    e.kind = EventKind::route_failed;
  }
  log(e);
}

void Simulator::generate_traffic() {
  if (slot_ < arrival_slot_) return;
  for (const auto& f : flows_) {
    auto& made = generated_[f.id];
    if (made >= f.packet_count()) continue;
    if (cfg_.protocol == ProtocolKind::mcr && !mcr_routes_.count(f.id)) setup_mcr(f);
    ++made;

    Packet p;
    p.id = next_packet_++;
    p.flow = f.id;
    p.src = f.src;
    p.dst = f.dst;
    p.dst_pos = positions_[f.dst];
    p.focus = positions_[f.src];
    p.capacity_req = f.capacity_req;
    p.payload_bits = static_cast<std::uint32_t>(f.packet_bits);

    Event e;
    e.kind = EventKind::originate;
    e.flow = f.id;
    e.packet = static_cast<std::int64_t>(p.id);
    e.node = f.src;
    e.target = f.dst;
    log(e);

    std::int64_t ready = slot_;
    if (cfg_.protocol == ProtocolKind::mcr) {
      const auto& route = mcr_routes_.at(f.id);
      if (route) p.route = *route;
      ready = std::max(ready, flow_ready_slot_.at(f.id));
    }
    handle_at(f.src, std::move(p), ready);
  }
}

void Simulator::handle_at(NodeId v, Packet p, std::int64_t ready_slot) {
  NodeState& st = nodes_[v].state;
  p.dst_pos = positions_[p.dst];  // location service lookup
  ForwardDecision d;
  switch (cfg_.protocol) {
    case ProtocolKind::qfgeo:
    case ProtocolKind::qfgeo_unbounded:
      d = qfgeo_on_packet(p, st, cfg_.params, estimate_phi(st, cfg_.params.c_min),
                          uniform01(rng_));
      break;
    case ProtocolKind::gf:
      p.visited.insert(v);
      d = p.visited.size() > kHeaderCapacity ? ForwardDecision::drop(DropReason::header_overflow)
                                             : gf_forward(p, st);
      break;
    case ProtocolKind::mcr:
      if (v == p.dst) {
        d = ForwardDecision::deliver();
      } else if (p.route_pos + 1 < p.route.size() && p.route[p.route_pos] == v) {
        d = ForwardDecision::forward(p.route[p.route_pos + 1]);
      } else {
        d = ForwardDecision::drop(DropReason::no_route);
      }
      break;
  }
  apply(v, std::move(p), d, ready_slot);
}

void Simulator::apply(NodeId v, Packet p, const ForwardDecision& d, std::int64_t ready_slot) {
  Event e;
  e.flow = p.flow;
  e.packet = static_cast<std::int64_t>(p.id);
  e.node = v;
  e.target = d.target == kNoNode ? -1 : static_cast<std::int64_t>(d.target);
  e.ell = p.ell;
  if (auto r = nodes_[v].state.retx.find(p.id); r != nodes_[v].state.retx.end()) {
    e.retx = r->second;
  }
  switch (d.action) {
    case Action::deliver:
      e.kind = EventKind::deliver;
      log(e);
      return;
    case Action::drop:
      e.kind = EventKind::drop;
      e.aux = static_cast<std::int64_t>(d.reason);
      log(e);
      return;
    case Action::forward:
    case Action::backtrack: {
      const bool back = d.action == Action::backtrack;
      e.kind = back ? EventKind::backtrack : EventKind::forward;
      log(e);
      const FlowId flow = p.flow;
      nodes_[v].queues[flow].push_back(Queued{std::move(p), d.target, back, ready_slot});
      return;
    }
  }
}

bool Simulator::sensed_busy(NodeId v, int channel,
                            const std::vector<Transmission>& txs) const {
  if (jammer_effect(positions_[v], channel, jammer_)) return true;
  for (const auto& t : txs) {
    if (t.channel == channel && t.sender != v &&
        distance(positions_[t.sender], positions_[v]) <= radius_) {
      return true;
    }
  }
  return false;
}

std::vector<Simulator::Transmission> Simulator::contend() {
  std::vector<Transmission> txs;
  std::vector<NodeId> order(nodes_.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng_, i)]);
  }

  const int channels = cfg_.radio.data_channels;
  for (NodeId v : order) {
    auto& rt = nodes_[v];
    auto ready_flow = [&](FlowId f) {
      auto it = rt.queues.find(f);
      return it != rt.queues.end() && !it->second.empty() &&
             it->second.front().ready_slot <= slot_;
    };
    bool has_ready = false;
    for (const auto& [f, q] : rt.queues) has_ready = has_ready || ready_flow(f);
    if (!has_ready) continue;
    if (rt.backoff > 0) {
      --rt.backoff;
      continue;
    }

    std::vector<int> idle;
    for (int c = 0; c < channels; ++c) {
      if (!sensed_busy(v, c, txs)) idle.push_back(c);
    }
    if (idle.empty()) {
      rt.backoff = static_cast<int>(
          uniform_index(rng_, static_cast<std::uint64_t>(cfg_.max_backoff_slots) + 1));
      Event e;
      e.kind = EventKind::defer;
      e.node = v;
      e.aux = rt.backoff;
      log(e);
      continue;
    }

    // One packet per idle channel, lowest channel first, flows round-robin.
    for (int c : idle) {
      std::optional<FlowId> pick;
      auto start = rt.queues.lower_bound(rt.rr_next);
      for (auto it = start; it != rt.queues.end() && !pick; ++it) {
        if (ready_flow(it->first)) pick = it->first;
      }
      for (auto it = rt.queues.begin(); it != start && !pick; ++it) {
        if (ready_flow(it->first)) pick = it->first;
      }
      if (!pick) break;
      rt.rr_next = *pick + 1;
      auto& q = rt.queues[*pick];
      in_flight_.push_back(InFlight{v, c, std::move(q.front())});
      q.pop_front();
      const auto& sent = in_flight_.back().entry;
      txs.push_back(Transmission{v, sent.next_hop, c, sent.packet.flow, sent.packet.id,
                                 sent.backtrack});
    }
  }
  return txs;
}

void Simulator::resolve(const std::vector<Transmission>& txs) {
  std::vector<InFlight> flights = std::move(in_flight_);
  in_flight_.clear();

  for (std::size_t i = 0; i < txs.size(); ++i) {
    const Transmission& t = txs[i];
    Event e;
    e.kind = EventKind::transmit;
    e.flow = t.flow;
    e.packet = static_cast<std::int64_t>(t.packet);
    e.node = t.sender;
    e.target = t.receiver;
    e.channel = t.channel;
    e.ell = flights[i].entry.packet.ell;
    e.retx = nodes_[t.sender].state.retx.count(t.packet)
                 ? nodes_[t.sender].state.retx.at(t.packet)
                 : 0;
    log(e);
  }

  for (std::size_t i = 0; i < txs.size(); ++i) {
    const Transmission& t = txs[i];
    const Point rx = positions_[t.receiver];
    EventKind outcome = EventKind::receive;
    if (distance(positions_[t.sender], rx) > radius_) {
      outcome = EventKind::link_lost;
    } else if (std::any_of(txs.begin(), txs.end(), [&](const Transmission& o) {
                 return o.sender == t.receiver && o.channel == t.channel;
               })) {
      outcome = EventKind::half_duplex;
    } else if (jammer_effect(rx, t.channel, jammer_)) {
      outcome = EventKind::jammed;
    } else {
      for (std::size_t j = 0; j < txs.size(); ++j) {
        if (j != i && txs[j].channel == t.channel &&
            distance(positions_[txs[j].sender], rx) <= radius_) {
          outcome = EventKind::collision;
          break;
        }
      }
    }

    Event e;
    e.kind = outcome;
    e.flow = t.flow;
    e.packet = static_cast<std::int64_t>(t.packet);
    e.node = t.receiver;
    e.target = t.sender;
    e.channel = t.channel;
    Queued entry = std::move(flights[i].entry);
    e.ell = entry.packet.ell;
    NodeState& sender = nodes_[t.sender].state;

    if (outcome == EventKind::receive) {
      log(e);
      sender.retx.erase(t.packet);
      Packet p = std::move(entry.packet);
      p.last_hop = t.sender;
      p.backtracked = t.backtrack;
      if (cfg_.protocol == ProtocolKind::mcr) ++p.route_pos;
      if (t.backtrack) qfgeo_on_backtrack(p, nodes_[t.receiver].state, t.sender);
      handle_at(t.receiver, std::move(p), slot_ + 1);
      continue;
    }

    const int count = ++sender.retx[t.packet];
    e.retx = count;
    log(e);
    // A missing acknowledgment backs the sender off like a busy sense does.
    auto& rt = nodes_[t.sender];
    rt.backoff = std::max(rt.backoff, static_cast<int>(uniform_index(
        rng_, static_cast<std::uint64_t>(cfg_.max_backoff_slots) + 1)));
    if (count > cfg_.params.retx_max) {
      retransmissions_exhausted(t.sender, std::move(entry));
    } else {
      entry.ready_slot = slot_ + 1;
      nodes_[t.sender].queues[t.flow].push_front(std::move(entry));
    }
  }
}

void Simulator::retransmissions_exhausted(NodeId v, Queued entry) {
  Packet& p = entry.packet;
  if (cfg_.protocol == ProtocolKind::gf || cfg_.protocol == ProtocolKind::mcr) {
    if (cfg_.protocol == ProtocolKind::mcr) {
      // A dead link invalidates the flow's route; the next packet re-explores.
      auto it = mcr_routes_.find(p.flow);
      if (it != mcr_routes_.end() && it->second && *it->second == p.route) {
        mcr_routes_.erase(it);
      }
    }
    apply(v, std::move(p), ForwardDecision::drop(DropReason::retx_exhausted), slot_ + 1);
    return;
  }

  NodeState& st = nodes_[v].state;
  st.failed_links[p.id].insert(entry.next_hop);
  if (!entry.backtrack) {
    auto parent = p.parent_of.find(entry.next_hop);
    if (parent != p.parent_of.end() && parent->second == v) p.parent_of.erase(parent);
  }
  p.dst_pos = positions_[p.dst];
  const ForwardDecision d = qfgeo_on_packet(p, st, cfg_.params,
                                            estimate_phi(st, cfg_.params.c_min),
                                            uniform01(rng_));
  if (d.action == Action::backtrack && st.failed_links[p.id].count(d.target)) {
    apply(v, std::move(p), ForwardDecision::drop(DropReason::retx_exhausted), slot_ + 1);
    return;
  }
  apply(v, std::move(p), d, slot_ + 1);
}

void Simulator::update_activity(const std::vector<Transmission>& txs) {
  const int channels = cfg_.radio.data_channels;
  const std::size_t row =
      static_cast<std::size_t>(slot_ % cfg_.theta_window_slots) * channels;
  for (auto& rt : nodes_) {
    const NodeId v = rt.state.id;
    for (int c = 0; c < channels; ++c) {
      const std::size_t k = row + static_cast<std::size_t>(c);
      const bool sent = std::any_of(txs.begin(), txs.end(), [&](const Transmission& t) {
        return t.sender == v && t.channel == c;
      });
      const bool sensed = sensed_busy(v, c, txs);
      rt.tx_sum += static_cast<int>(sent) - rt.tx_hist[k];
      rt.sense_sum += static_cast<int>(sensed) - rt.sense_hist[k];
      rt.tx_hist[k] = sent;
      rt.sense_hist[k] = sensed;
    }
    rt.state.theta = theta_of(rt);
  }
}

void Simulator::step_slot() {
  if (done()) return;
  const double t = static_cast<double>(slot_) * cfg_.slot_s;

  if (mobility_) {
    move_nodes(positions_, *mobility_, cfg_.slot_s);
    for (auto& rt : nodes_) rt.state.position = positions_[rt.state.id];
  }
  run_beacons(t);
  prune_neighbors(t);
  generate_traffic();
  const auto txs = contend();
  resolve(txs);
  update_activity(txs);
  ++slot_;
}

TrialResult run_trial(const TrialConfig& cfg) {
  Simulator sim(cfg);
  while (!sim.done()) sim.step_slot();

  TrialResult out;
  out.flows = sim.flows();
  out.report = compute_metrics(sim.log(), out.flows, cfg.radio.bandwidth_bps);
  const auto& c = sim.config();
  auto echo = [&](std::string k, std::string v) {
    out.report.params_echo.emplace_back(std::move(k), std::move(v));
  };
  auto num = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  echo("protocol", to_string(c.protocol));
  echo("size", std::to_string(sim.positions().size()));
  echo("density", num(c.network.rho));
  echo("seed", std::to_string(c.seed));
  echo("flows", std::to_string(out.flows.size()));
  echo("mobility_mps", num(c.mobility_mps));
  echo("jammer", c.jammer.enabled ? "on" : "off");
  echo("duration_s", num(c.duration_s));
  echo("slot_s", num(c.slot_s));
  echo("epsilon", num(c.params.epsilon));
  echo("retx_max", std::to_string(c.params.retx_max));
  echo("c_min", num(c.params.c_min));
  echo("theta_mode", c.params.theta_mode == ThetaMode::literal ? "literal" : "linear");
  out.log = sim.log();
  return out;
}

}  // namespace qfgeo

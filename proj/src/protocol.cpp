#include "qfgeo/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

namespace qfgeo {

const char* to_string(Action a) {
  switch (a) {
    case Action::forward: return "forward";
    case Action::backtrack: return "backtrack";
    case Action::deliver: return "deliver";
    case Action::drop: return "drop";
  }
  return "?";
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::none: return "none";
    case DropReason::search_exhausted: return "search_exhausted";
    case DropReason::no_progress: return "no_progress";
    case DropReason::header_overflow: return "header_overflow";
    case DropReason::retx_exhausted: return "retx_exhausted";
    case DropReason::no_route: return "no_route";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<NodeId>* find_set(const std::map<PacketId, std::set<NodeId>>& m,
                                 PacketId id) {
  auto it = m.find(id);
  return it == m.end() ? nullptr : &it->second;
}

bool contains(const std::set<NodeId>* s, NodeId id) { return s && s->count(id) > 0; }

// Ties go to the lowest id because candidates arrive in ascending order.
NodeId closest_to_destination(const Packet& p, const NodeState& v,
                              const std::vector<NodeId>& candidates) {
  NodeId best = kNoNode;
  double best_d = kInf;
  for (NodeId u : candidates) {
    const double d = u == p.dst ? 0.0 : distance(v.neighbors.at(u).position, p.dst_pos);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

}  // namespace

std::vector<NodeId> ellipse_neighbors(const Packet& p, const NodeState& v) {
  const auto* failed = find_set(v.failed_links, p.id);
  const bool unbounded =
      !p.ellipse_set() || std::isinf(p.ell) || distance(p.focus, p.dst_pos) == 0.0;
  std::vector<NodeId> out;
  for (const auto& [id, entry] : v.neighbors) {
    if (contains(failed, id)) continue;
    if (id == p.dst || unbounded ||
        ellipse_contains(p.focus, p.dst_pos, p.ell, entry.position)) {
      out.push_back(id);
    }
  }
  return out;
}

ForwardDecision qfgeo_on_packet(Packet& p, NodeState& v, const ProtocolParams& params,
                                double phi, double rnd) {
  if (v.id == p.dst) return ForwardDecision::deliver();

  auto retx = v.retx.find(p.id);
  const bool exceeded = retx != v.retx.end() && retx->second > params.retx_max;
  if ((v.id == p.src && !p.ellipse_set()) || exceeded) {
    p.focus = v.position;
    const double delta = distance(v.position, p.dst_pos);
    if (!params.bounded || phi <= 0.0) {
      p.ell = kInf;
    } else if (delta == 0.0) {
      p.ell = 1.0;
    } else {
      p.ell = predict_l_cap(params.model, params.density, delta, std::min(phi, 1.0));
    }
    if (exceeded) retx->second = 0;
  }
  return qfgeo_forward(p, v, params, rnd);
}

ForwardDecision qfgeo_forward(Packet& p, NodeState& v, const ProtocolParams& params,
                              double rnd) {
  if (v.id == p.dst) return ForwardDecision::deliver();

  // The holder counts as visited whether it forwards or backtracks;
  // otherwise a dead end would be re-entered through the capacity-waived
  // branch forever.
  p.visited.insert(v.id);
  if (p.visited.size() > kHeaderCapacity) {
    return ForwardDecision::drop(DropReason::header_overflow);
  }

  const auto in_ellipse = ellipse_neighbors(p, v);
  const auto* blocked = find_set(v.backtrack_sets, p.id);

  std::vector<NodeId> qualified;
  std::vector<NodeId> unvisited;
  for (NodeId u : in_ellipse) {
    if (p.visited.count(u)) continue;
    unvisited.push_back(u);
    if (contains(blocked, u)) continue;
    // The destination sinks the flow rather than relaying it.
    if (u == p.dst || v.neighbors.at(u).theta >= p.capacity_req) qualified.push_back(u);
  }

  auto take = [&](NodeId u, ForwardDecision d) {
    p.parent_of[u] = v.id;
    return d;
  };

  if (!qualified.empty()) {
    const bool exploit = rnd < 1.0 - params.epsilon;
    auto q = v.last_forwarder.find(p.flow);
    if (exploit && q != v.last_forwarder.end() &&
        std::binary_search(qualified.begin(), qualified.end(), q->second)) {
      auto d = ForwardDecision::forward(q->second);
      d.used_memory = true;
      return take(q->second, d);
    }
    const NodeId u = closest_to_destination(p, v, qualified);
    v.last_forwarder[p.flow] = u;
    auto d = ForwardDecision::forward(u);
    d.explored = !exploit;
    return take(u, d);
  }

  if (!unvisited.empty()) {
    const NodeId u = closest_to_destination(p, v, unvisited);
    v.last_forwarder[p.flow] = u;
    return take(u, ForwardDecision::forward(u));
  }

  auto parent = p.parent_of.find(v.id);
  if (parent == p.parent_of.end()) return ForwardDecision::drop(DropReason::search_exhausted);
  return ForwardDecision::backtrack(parent->second);
}

void qfgeo_on_backtrack(const Packet& p, NodeState& parent, NodeId from) {
  parent.backtrack_sets[p.id].insert(from);
  auto q = parent.last_forwarder.find(p.flow);
  if (q != parent.last_forwarder.end() && q->second == from) parent.last_forwarder.erase(q);
}

double estimate_theta(double d_v, double i_v, ThetaMode mode) {
  const double load = mode == ThetaMode::literal ? d_v + std::exp(i_v) : d_v + i_v;
  return std::clamp(1.0 - load, 0.0, 1.0);
}

double estimate_phi(std::span<const double> neighbor_thetas, double c_min) {
  if (neighbor_thetas.empty()) return 1.0;
  const auto rich = std::count_if(neighbor_thetas.begin(), neighbor_thetas.end(),
                                  [&](double t) { return t >= c_min; });
  return static_cast<double>(rich) / static_cast<double>(neighbor_thetas.size());
}

double estimate_phi(const NodeState& v, double c_min) {
  std::vector<double> thetas;
  thetas.reserve(v.neighbors.size());
  for (const auto& [id, e] : v.neighbors) thetas.push_back(e.theta);
  return estimate_phi(thetas, c_min);
}

ForwardDecision gf_forward(const Packet& p, const NodeState& v) {
  if (v.id == p.dst) return ForwardDecision::deliver();
  const double own = distance(v.position, p.dst_pos);
  NodeId best = kNoNode;
  double best_d = own;
  for (const auto& [id, e] : v.neighbors) {
    const double d = id == p.dst ? 0.0 : distance(e.position, p.dst_pos);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  if (best == kNoNode) return ForwardDecision::drop(DropReason::no_progress);
  return ForwardDecision::forward(best);
}

std::optional<WidestPath> widest_path(std::span<const std::vector<NodeId>> adjacency,
                                      std::span<const double> capacity, NodeId src,
                                      NodeId dst) {
  const std::size_t n = adjacency.size();
  if (src >= n || dst >= n || capacity.size() != n) {
    throw std::invalid_argument("widest_path: bad node id or capacity vector");
  }
  if (src == dst) return WidestPath{{src}, kInf};

  // Best achievable bottleneck on arrival at each node.
  std::vector<double> width(n, -kInf);
  width[src] = kInf;
  std::priority_queue<std::pair<double, NodeId>> heap;
  heap.push({kInf, src});
  while (!heap.empty()) {
    const auto [wu, u] = heap.top();
    heap.pop();
    if (wu < width[u] || u == dst) continue;
    const double through = u == src ? kInf : std::min(width[u], capacity[u]);
    for (NodeId w : adjacency[u]) {
      if (through > width[w]) {
        width[w] = through;
        heap.push({through, w});
      }
    }
  }
  if (width[dst] == -kInf) return std::nullopt;
  const double bottleneck = width[dst];

  // Fewest hops, then lexicographic, among relays that keep the bottleneck.
  auto allowed = [&](NodeId x) { return x == src || x == dst || capacity[x] >= bottleneck; };
  constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> hops(n, unseen);
  std::deque<NodeId> frontier{dst};
  hops[dst] = 0;
  while (!frontier.empty()) {
    const NodeId x = frontier.front();
    frontier.pop_front();
    if (x == src) continue;
    for (NodeId y : adjacency[x]) {
      if (hops[y] == unseen && allowed(y)) {
        hops[y] = hops[x] + 1;
        frontier.push_back(y);
      }
    }
  }
  if (hops[src] == unseen) return std::nullopt;

  WidestPath out{{src}, bottleneck};
  NodeId cur = src;
  while (cur != dst) {
    NodeId next = kNoNode;
    for (NodeId y : adjacency[cur]) {
      if (y != src && hops[y] != unseen && hops[y] + 1 == hops[cur] && y < next) next = y;
    }
    out.nodes.push_back(next);
    cur = next;
  }
  return out;
}

std::optional<McrRoute> mcr_setup(NodeId src, NodeId dst, const EllipseModel& model,
                                  double rho, const LocalViewCollector& collect) {
  const auto src_view = collect(src);
  const auto dst_view = collect(dst);
  if (!src_view || !dst_view || src == dst) return std::nullopt;
  const double delta = distance(src_view->position, dst_view->position);
  if (delta == 0.0) return std::nullopt;
  const double ell = predict_l_con(model, rho, delta);

  std::map<NodeId, LocalView> views{{src, *src_view}};
  std::map<NodeId, std::size_t> depth{{src, 0}};
  std::deque<NodeId> frontier{src};
  std::size_t broadcasts = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    if (u == dst) continue;  // the destination answers but does not re-flood
    ++broadcasts;
    for (NodeId w : views.at(u).neighbors) {
      if (views.count(w)) continue;
      auto wv = collect(w);
      if (!wv) continue;
      if (w != dst &&
          !ellipse_contains(src_view->position, dst_view->position, ell, wv->position)) {
        continue;
      }
      depth[w] = depth[u] + 1;
      views.emplace(w, std::move(*wv));
      frontier.push_back(w);
    }
  }
  if (!views.count(dst)) return std::nullopt;

  std::vector<NodeId> ids;
  std::map<NodeId, NodeId> compact;
  for (const auto& [id, view] : views) {
    compact[id] = static_cast<NodeId>(ids.size());
    ids.push_back(id);
  }
  std::vector<std::vector<NodeId>> adjacency(ids.size());
  std::vector<double> capacity(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& view = views.at(ids[i]);
    capacity[i] = view.theta;
    for (NodeId w : view.neighbors) {
      if (auto c = compact.find(w); c != compact.end()) adjacency[i].push_back(c->second);
    }
    std::sort(adjacency[i].begin(), adjacency[i].end());
  }

  auto path = widest_path(adjacency, capacity, compact.at(src), compact.at(dst));
  if (!path) return std::nullopt;
  for (auto& id : path->nodes) id = ids[id];

  std::size_t responses = 0;
  for (const auto& [id, d] : depth) responses += d;
  return McrRoute{std::move(*path), ell, views.size(), broadcasts + responses};
}

}  // namespace qfgeo

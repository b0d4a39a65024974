#include "qfgeo/lossless_router.hpp"

#include <stdexcept>

namespace qfgeo {

LosslessRouter::LosslessRouter(const NetworkGraph& graph, std::vector<double> theta,
                               ProtocolParams params)
    : graph_(&graph), params_(std::move(params)), nodes_(graph.size()) {
  if (theta.size() != graph.size()) {
    throw std::invalid_argument("one theta per node required");
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    auto& st = nodes_[i];
    st.id = static_cast<NodeId>(i);
    st.position = graph.position(st.id);
    st.theta = theta[i];
    for (NodeId u : graph.neighbors(st.id)) {
      st.neighbors[u] = NeighborEntry{graph.position(u), theta[u], 0.0};
    }
  }
}

Packet LosslessRouter::make_packet(NodeId src, NodeId dst, FlowId flow,
                                   double capacity_req) {
  Packet p;
  p.id = next_packet_++;
  p.flow = flow;
  p.src = src;
  p.dst = dst;
  p.dst_pos = graph_->position(dst);
  p.focus = graph_->position(src);
  p.capacity_req = capacity_req;
  return p;
}

LosslessRoute LosslessRouter::route_qfgeo(NodeId src, NodeId dst, FlowId flow,
                                          double capacity_req, Rng& rng) {
  if (src == dst) throw std::invalid_argument("route needs distinct endpoints");
  LosslessRoute out;
  out.packet = make_packet(src, dst, flow, capacity_req);
  Packet& p = out.packet;
  NodeId at = src;
  out.walk.push_back(at);

  // A correct depth-first traversal needs at most 2(n - 1) hops.
  const std::size_t step_limit = 4 * graph_->size() + 4;
  for (std::size_t step = 0; step <= step_limit; ++step) {
    NodeState& v = nodes_[at];
    if (p.backtracked) qfgeo_on_backtrack(p, v, p.last_hop);
    const double phi = estimate_phi(v, params_.c_min);
    const ForwardDecision d = qfgeo_on_packet(p, v, params_, phi, uniform01(rng));
    if (step == 0) out.ell = p.ell;
    switch (d.action) {
      case Action::deliver:
        out.delivered = true;
        return out;
      case Action::drop:
        out.reason = d.reason;
        return out;
      case Action::forward:
      case Action::backtrack:
        (d.action == Action::forward ? out.forwards : out.backtracks)++;
        p.last_hop = at;
        p.backtracked = d.action == Action::backtrack;
        at = d.target;
        out.walk.push_back(at);
        break;
    }
  }
  throw std::logic_error("lossless traversal did not terminate");
}

LosslessRoute LosslessRouter::route_gf(NodeId src, NodeId dst) {
  if (src == dst) throw std::invalid_argument("route needs distinct endpoints");
  LosslessRoute out;
  out.packet = make_packet(src, dst, 0, 0.0);
  NodeId at = src;
  out.walk.push_back(at);
  for (;;) {
    const ForwardDecision d = gf_forward(out.packet, nodes_[at]);
    if (d.action == Action::deliver) {
      out.delivered = true;
      return out;
    }
    if (d.action == Action::drop) {
      out.reason = d.reason;
      return out;
    }
    ++out.forwards;
    at = d.target;
    out.walk.push_back(at);
  }
}

}  // namespace qfgeo

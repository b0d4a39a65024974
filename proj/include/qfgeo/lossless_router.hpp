#pragma once

// Drives the forwarding logic hop by hop over a static graph with perfect
// links and exact neighbor tables.

#include <vector>

#include "qfgeo/protocol.hpp"
#include "qfgeo/random.hpp"

namespace qfgeo {

struct LosslessRoute {
  bool delivered = false;
  DropReason reason = DropReason::none;
  std::size_t forwards = 0;
  std::size_t backtracks = 0;
  std::vector<NodeId> walk;  // every holder of the packet, in order
  double ell = 0.0;          // ellipse factor chosen at the source
  Packet packet;             // final header state

  std::size_t hops() const { return forwards + backtracks; }
};

class LosslessRouter {
 public:
  // theta[i] is node i's residual capacity as its neighbors see it.
  LosslessRouter(const NetworkGraph& graph, std::vector<double> theta,
                 ProtocolParams params);

  LosslessRoute route_qfgeo(NodeId src, NodeId dst, FlowId flow, double capacity_req,
                            Rng& rng);
  LosslessRoute route_gf(NodeId src, NodeId dst);

  const NodeState& node(NodeId id) const { return nodes_.at(id); }
  const ProtocolParams& params() const { return params_; }

 private:
  Packet make_packet(NodeId src, NodeId dst, FlowId flow, double capacity_req);

  const NetworkGraph* graph_;
  ProtocolParams params_;
  std::vector<NodeState> nodes_;
  PacketId next_packet_ = 0;
};

}  // namespace qfgeo

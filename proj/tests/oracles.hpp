#pragma once

// Independent brute-force references used to check the production
// algorithms. Deliberately naive: exhaustive enumeration, direct formulas.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "qfgeo/geometry.hpp"
#include "qfgeo/random.hpp"

namespace oracle {

using qfgeo::NodeId;
using qfgeo::Point;

inline double focal_sum(Point a, Point b, Point u) {
  return std::hypot(u.x - a.x, u.y - a.y) + std::hypot(u.x - b.x, u.y - b.y);
}

inline bool in_ellipse(Point a, Point b, double ell, Point u) {
  return focal_sum(a, b, u) <= ell * std::hypot(b.x - a.x, b.y - a.y);
}

// Adjacency by quadratic scan, independent of NetworkGraph.
inline std::vector<std::vector<NodeId>> unit_disk(const std::vector<Point>& pts, double r = 1.0) {
  std::vector<std::vector<NodeId>> adj(pts.size());
  for (NodeId i = 0; i < pts.size(); ++i) {
    for (NodeId j = 0; j < pts.size(); ++j) {
      if (i != j && std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) <= r) {
        adj[i].push_back(j);
      }
    }
  }
  return adj;
}

// Every simple path from s to d, in DFS order over ascending neighbor ids.
inline void for_each_simple_path(const std::vector<std::vector<NodeId>>& adj, NodeId s,
                                 NodeId d,
                                 const std::function<void(const std::vector<NodeId>&)>& visit) {
  std::vector<NodeId> path{s};
  std::vector<char> on(adj.size(), 0);
  on[s] = 1;
  std::function<void(NodeId)> rec = [&](NodeId u) {
    if (u == d) {
      visit(path);
      return;
    }
    for (NodeId w : adj[u]) {
      if (on[w]) continue;
      on[w] = 1;
      path.push_back(w);
      rec(w);
      path.pop_back();
      on[w] = 0;
    }
  };
  rec(s);
}

struct Path {
  std::vector<NodeId> nodes;
  double length = 0.0;
};

// Minimum Euclidean length; ties to the lexicographically smallest sequence.
inline std::optional<Path> shortest_by_enumeration(const std::vector<Point>& pts, NodeId s,
                                                   NodeId d) {
  const auto adj = unit_disk(pts);
  std::optional<Path> best;
  for_each_simple_path(adj, s, d, [&](const std::vector<NodeId>& p) {
    double len = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) len += qfgeo::distance(pts[p[i - 1]], pts[p[i]]);
    if (!best || len < best->length || (len == best->length && p < best->nodes)) {
      best = Path{p, len};
    }
  });
  return best;
}

struct Widest {
  std::vector<NodeId> nodes;
  double bottleneck = 0.0;
};

// Maximum over simple paths of the minimum relay capacity (endpoints do not
// count; a direct link is unbounded), then fewest hops, then lexicographic.
inline std::optional<Widest> widest_by_enumeration(const std::vector<std::vector<NodeId>>& adj,
                                                   const std::vector<double>& cap, NodeId s,
                                                   NodeId d) {
  std::optional<Widest> best;
  for_each_simple_path(adj, s, d, [&](const std::vector<NodeId>& p) {
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < p.size(); ++i) b = std::min(b, cap[p[i]]);
    if (!best || b > best->bottleneck ||
        (b == best->bottleneck && (p.size() < best->nodes.size() ||
                                   (p.size() == best->nodes.size() && p < best->nodes)))) {
      best = Widest{p, b};
    }
  });
  return best;
}

// BFS over the subgraph induced by `allowed`.
inline bool reachable(const std::vector<std::vector<NodeId>>& adj, const std::vector<char>& allowed,
                      NodeId s, NodeId d) {
  if (!allowed[s] || !allowed[d]) return false;
  std::vector<char> seen(adj.size(), 0);
  std::deque<NodeId> q{s};
  seen[s] = 1;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    if (u == d) return true;
    for (NodeId w : adj[u]) {
      if (allowed[w] && !seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
    }
  }
  return false;
}

inline std::vector<Point> random_points(std::size_t n, double side, qfgeo::Rng& rng) {
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {qfgeo::uniform(rng, 0.0, side), qfgeo::uniform(rng, 0.0, side)};
  return pts;
}

}  // namespace oracle

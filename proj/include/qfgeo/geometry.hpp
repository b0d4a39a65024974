#pragma once

// Points, unit-disk graphs, elliptic search regions and Euclidean
// shortest paths. All lengths are in units of the transmission radius R.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace qfgeo {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

// n nodes at an expected rho nodes per R^2, deployed in a square.
struct DensitySpec {
  std::size_t n = 0;
  double rho = 0.0;

  // w = sqrt(n * R^2 / rho)
  double side() const;
};

class NetworkGraph {
 public:
  NetworkGraph() = default;
  explicit NetworkGraph(std::vector<Point> positions, double radius = 1.0);

  std::size_t size() const { return positions_.size(); }
  double radius() const { return radius_; }
  Point position(NodeId id) const { return positions_.at(id); }
  std::span<const Point> positions() const { return positions_; }

  // Sorted ascending.
  std::span<const NodeId> neighbors(NodeId id) const { return adjacency_.at(id); }
  bool adjacent(NodeId a, NodeId b) const;
  std::size_t edge_count() const;

 private:
  std::vector<Point> positions_;
  std::vector<std::vector<NodeId>> adjacency_;
  double radius_ = 1.0;
};

struct PathRecord {
  std::vector<NodeId> nodes;
  double length = 0.0;
};

// Uniform i.i.d. placement over the spec's square; deterministic per seed.
// Throws std::invalid_argument for n < 2 or rho <= 0.
NetworkGraph generate_network(const DensitySpec& spec, std::uint64_t seed);

// dist(src,u) + dist(u,dst) <= ell * dist(src,dst), boundary inclusive.
// src == dst is rejected; zero-distance flows must be handled by the caller.
bool ellipse_contains(Point src, Point dst, double ell, Point u);

// Minimum total Euclidean length; equal-length ties go to the
// lexicographically smallest node sequence.
std::optional<PathRecord> euclidean_shortest_path(const NetworkGraph& g,
                                                  NodeId s, NodeId d);

// Largest focal-sum ratio over the path's nodes: the factor of the
// smallest src/dst-focused ellipse that still contains the whole path.
double path_ellipse_factor(std::span<const Point> path_points, Point src, Point dst);
double path_ellipse_factor(const NetworkGraph& g, const PathRecord& path);

std::vector<Point> path_points(const NetworkGraph& g, const PathRecord& path);

// Plain-text graph file: optional leading '#' comment lines, a header
// "n rho seed", then one "id x y" line per node. Adjacency is rebuilt on load.
struct GraphFile {
  DensitySpec spec;
  std::uint64_t seed = 0;
  NetworkGraph graph;
};

void write_graph(std::ostream& out, const GraphFile& file);
GraphFile read_graph(std::istream& in);

}  // namespace qfgeo

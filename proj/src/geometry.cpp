#include "qfgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qfgeo/random.hpp"

namespace qfgeo {

double distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double DensitySpec::side() const {
  return std::sqrt(static_cast<double>(n) / rho);
}

NetworkGraph::NetworkGraph(std::vector<Point> positions, double radius)
    : positions_(std::move(positions)), adjacency_(positions_.size()), radius_(radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const std::size_t n = positions_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(positions_[i].x) || !std::isfinite(positions_[i].y)) {
      throw std::invalid_argument("node coordinates must be finite");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(positions_[i], positions_[j]) <= radius_) {
        adjacency_[i].push_back(static_cast<NodeId>(j));
        adjacency_[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
}

bool NetworkGraph::adjacent(NodeId a, NodeId b) const {
  const auto& adj = adjacency_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t NetworkGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& adj : adjacency_) total += adj.size();
  return total / 2;
}

NetworkGraph generate_network(const DensitySpec& spec, std::uint64_t seed) {
  if (spec.n < 2) throw std::invalid_argument("network needs at least 2 nodes");
  if (!(spec.rho > 0.0)) throw std::invalid_argument("density must be positive");
  const double w = spec.side();
  Rng rng(seed);
  std::vector<Point> pts(spec.n);
  for (auto& p : pts) {
    p.x = uniform(rng, 0.0, w);
    p.y = uniform(rng, 0.0, w);
  }
  return NetworkGraph(std::move(pts));
}

bool ellipse_contains(Point src, Point dst, double ell, Point u) {
  const double focal = distance(src, dst);
  if (focal == 0.0) throw std::invalid_argument("ellipse foci coincide");
  return distance(src, u) + distance(u, dst) <= ell * focal;
}

namespace {

std::vector<NodeId> walk_back(const std::vector<NodeId>& pred, NodeId s, NodeId v) {
  std::vector<NodeId> path{v};
  while (v != s) {
    v = pred[v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<PathRecord> euclidean_shortest_path(const NetworkGraph& g, NodeId s,
                                                  NodeId d) {
  const std::size_t n = g.size();
  if (s >= n || d >= n) throw std::out_of_range("node id out of range");
  if (s == d) return PathRecord{{s}, 0.0};

  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr NodeId none = std::numeric_limits<NodeId>::max();
  std::vector<double> dist(n, inf);
  std::vector<NodeId> pred(n, none);
  std::vector<char> settled(n, 0);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[s] = 0.0;
  heap.push({0.0, s});

  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u == d) break;
    for (NodeId v : g.neighbors(u)) {
      if (settled[v]) continue;
      const double alt = du + distance(g.position(u), g.position(v));
      if (alt < dist[v]) {
        dist[v] = alt;
        pred[v] = u;
        heap.push({alt, v});
      } else if (alt == dist[v] && pred[v] != u) {
        // Exact tie: keep the lexicographically smaller node sequence.
        auto incumbent = walk_back(pred, s, v);
        auto challenger = walk_back(pred, s, u);
        challenger.push_back(v);
        if (challenger < incumbent) pred[v] = u;
      }
    }
  }

  if (!settled[d]) return std::nullopt;
  return PathRecord{walk_back(pred, s, d), dist[d]};
}

double path_ellipse_factor(std::span<const Point> path_points, Point src, Point dst) {
  if (path_points.empty()) throw std::invalid_argument("empty path");
  const double focal = distance(src, dst);
  if (focal == 0.0) throw std::invalid_argument("zero source-destination distance");
  double worst = 0.0;
  for (Point p : path_points) {
    worst = std::max(worst, distance(src, p) + distance(p, dst));
  }
  // Division can round the factor below what membership needs; nudge it up
  // so the path always lies inside its own ellipse.
  double ell = worst / focal;
  while (ell * focal < worst) ell = std::nextafter(ell, std::numeric_limits<double>::infinity());
  return ell;
}

std::vector<Point> path_points(const NetworkGraph& g, const PathRecord& path) {
  std::vector<Point> pts;
  pts.reserve(path.nodes.size());
  for (NodeId id : path.nodes) pts.push_back(g.position(id));
  return pts;
}

double path_ellipse_factor(const NetworkGraph& g, const PathRecord& path) {
  if (path.nodes.empty()) throw std::invalid_argument("empty path");
  const auto pts = path_points(g, path);
  return path_ellipse_factor(pts, pts.front(), pts.back());
}

void write_graph(std::ostream& out, const GraphFile& file) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu %.17g %llu\n", file.graph.size(), file.spec.rho,
                static_cast<unsigned long long>(file.seed));
  out << buf;
  for (std::size_t i = 0; i < file.graph.size(); ++i) {
    const Point p = file.graph.position(static_cast<NodeId>(i));
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i, p.x, p.y);
    out << buf;
  }
}

GraphFile read_graph(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("graph file: missing header");
  GraphFile file;
  {
    std::istringstream hs(line);
    unsigned long long seed = 0;
    if (!(hs >> file.spec.n >> file.spec.rho >> seed)) {
      throw std::runtime_error("graph file: malformed header");
    }
    file.seed = seed;
  }
  std::vector<Point> pts(file.spec.n);
  std::vector<char> seen(file.spec.n, 0);
  for (std::size_t k = 0; k < file.spec.n; ++k) {
    if (!next_line()) throw std::runtime_error("graph file: truncated node list");
    std::istringstream ls(line);
    std::size_t id = 0;
    Point p;
    if (!(ls >> id >> p.x >> p.y) || id >= file.spec.n || seen[id]) {
      throw std::runtime_error("graph file: bad node line: " + line);
    }
    seen[id] = 1;
    pts[id] = p;
  }
  file.graph = NetworkGraph(std::move(pts));
  return file;
}

}  // namespace qfgeo

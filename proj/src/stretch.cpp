#include "qfgeo/stretch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "qfgeo/random.hpp"

namespace qfgeo {

std::vector<double> standard_densities() { return {std::sqrt(2.0), 2.0, 3.0, 4.0, 5.0}; }

std::optional<double> path_stretch(const NetworkGraph& g, NodeId s, NodeId d) {
  if (s == d) throw std::invalid_argument("path stretch needs distinct endpoints");
  const auto path = euclidean_shortest_path(g, s, d);
  if (!path) return std::nullopt;
  return path->length / distance(g.position(s), g.position(d));
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t rho_index, std::size_t trial) {
  return derive_seed(master, rho_index, trial);
}

std::optional<StretchSample> run_stretch_trial(std::size_t n, double rho,
                                               std::uint64_t network_seed) {
  const NetworkGraph g = generate_network({n, rho}, network_seed);
  Rng pick(derive_seed(network_seed, 0x5eed));
  const auto s = static_cast<NodeId>(uniform_index(pick, n));
  auto d = static_cast<NodeId>(uniform_index(pick, n - 1));
  if (d >= s) ++d;

  const auto path = euclidean_shortest_path(g, s, d);
  if (!path) return std::nullopt;
  const double delta = distance(g.position(s), g.position(d));
  return StretchSample{rho, delta, path->length / delta, path_ellipse_factor(g, *path),
                       network_seed};
}

StudyResult sample_stretch(const StudyConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::size_t per_rho = config.trials;
  const std::size_t total = per_rho * config.rho_list.size();
  std::vector<std::optional<StretchSample>> slots(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t ri = k / per_rho;
      const std::size_t t = k % per_rho;
      slots[k] = run_stretch_trial(config.n, config.rho_list[ri],
                                   trial_seed(config.seed, ri, t));
    }
  };
  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  StudyResult result;
  for (std::size_t ri = 0; ri < config.rho_list.size(); ++ri) {
    DensityTally tally{config.rho_list[ri], per_rho, 0};
    for (std::size_t t = 0; t < per_rho; ++t) {
      if (const auto& s = slots[ri * per_rho + t]) {
        result.samples.push_back(*s);
        ++tally.retained;
      }
    }
    result.tallies.push_back(tally);
  }
  return result;
}

void write_samples_csv(std::ostream& out, const std::vector<StretchSample>& samples) {
  out << "rho,delta,zeta,ell_obs,seed\n";
  char buf[160];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%llu\n", s.rho, s.delta, s.zeta,
                  s.ell_obs, static_cast<unsigned long long>(s.seed));
    out << buf;
  }
}

std::vector<StretchSample> read_samples_csv(std::istream& in) {
  std::vector<StretchSample> samples;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "rho,delta,zeta,ell_obs,seed") {
        throw std::runtime_error("stretch csv: unexpected header: " + line);
      }
      header = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    StretchSample s;
    unsigned long long seed = 0;
    if (!(ls >> s.rho >> s.delta >> s.zeta >> s.ell_obs >> seed)) {
      throw std::runtime_error("stretch csv: malformed row");
    }
    s.seed = seed;
    samples.push_back(s);
  }
  if (!header) throw std::runtime_error("stretch csv: missing header");
  return samples;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace qfgeo

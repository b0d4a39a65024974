#pragma once

// Monte Carlo path-stretch study over random unit-disk networks.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qfgeo/geometry.hpp"

namespace qfgeo {

struct StretchSample {
  double rho = 0.0;
  double delta = 0.0;    // endpoint distance / R
  double zeta = 0.0;     // shortest-path length / endpoint distance
  double ell_obs = 0.0;  // ellipse factor of the found shortest path
  std::uint64_t seed = 0;
};

struct StudyConfig {
  std::size_t n = 343;
  std::vector<double> rho_list;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct DensityTally {
  double rho = 0.0;
  std::size_t attempted = 0;
  std::size_t retained = 0;
};

struct StudyResult {
  std::vector<StretchSample> samples;  // ordered by (rho index, trial)
  std::vector<DensityTally> tallies;
};

std::vector<double> standard_densities();  // {sqrt 2, 2, 3, 4, 5}

std::optional<double> path_stretch(const NetworkGraph& g, NodeId s, NodeId d);

// Network seed for trial `trial` of density index `rho_index`.
std::uint64_t trial_seed(std::uint64_t master, std::size_t rho_index, std::size_t trial);

// One trial: build the network, draw a uniformly random endpoint pair and
// measure it. Empty when the pair is disconnected.
std::optional<StretchSample> run_stretch_trial(std::size_t n, double rho,
                                               std::uint64_t network_seed);

StudyResult sample_stretch(const StudyConfig& config);

// Header "rho,delta,zeta,ell_obs,seed", 6-decimal fixed-point reals.
void write_samples_csv(std::ostream& out, const std::vector<StretchSample>& samples);
std::vector<StretchSample> read_samples_csv(std::istream& in);

// Linear-interpolation percentile (q in [0,1]) of an unsorted sample.
double percentile(std::vector<double> values, double q);

}  // namespace qfgeo

#ifndef ROADSNAP_SYNTHETIC_HPP
#define ROADSNAP_SYNTHETIC_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "roadsnap/network.hpp"

namespace roadsnap {

/// One traffic regime: snapshots in [begin, end) slow every edge whose
/// endpoints both lie inside the box by `slowdown` (> 1).
struct RegimeSpec {
  std::size_t begin = 0;  // snapshot indices, half-open
  std::size_t end = 0;
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;  // meters
  double slowdown = 1.0;
};

/// Desk-scale stand-in for a real dynamic road network: a grid with constant
/// base travel times, regime slowdowns, and optional multiplicative
/// log-normal noise exp(noise_level * N(0,1)) per (edge, snapshot).
struct SyntheticScenario {
  std::size_t grid_width = 20;
  std::size_t grid_height = 20;
  double spacing_m = 500.0;
  double base_speed_mps = 10.0;
  std::size_t num_snapshots = 48;
  std::int64_t snapshot_interval_s = 300;
  std::vector<RegimeSpec> regimes;
  double noise_level = 0.0;
};

struct SyntheticData {
  std::shared_ptr<const RoadNetwork> network;
  SnapshotSeries series;
  std::vector<int> regime_labels;  // per snapshot: active regime index, or
                                   // regimes.size() when none is active
};

/// 4-neighbor grid with bidirectional arcs; a W x H grid has 2*(2WH - W - H)
/// directed edges.
RoadNetwork make_grid_network(std::size_t width, std::size_t height, double spacing_m);

void validate_scenario(const SyntheticScenario& scenario);

SyntheticData generate_synthetic(const SyntheticScenario& scenario, std::uint64_t seed);

}  // namespace roadsnap

#endif  // ROADSNAP_SYNTHETIC_HPP

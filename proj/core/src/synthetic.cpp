#include "roadsnap/synthetic.hpp"

#include <cmath>
#include <sstream>

#include "roadsnap/rng.hpp"

namespace roadsnap {

RoadNetwork make_grid_network(std::size_t width, std::size_t height, double spacing_m) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("make_grid_network: grid must be at least 2x2");
  std::vector<Vertex> vertices;
  vertices.reserve(width * height);
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      Vertex v;
      v.id = static_cast<VertexId>(row * width + col);
      v.x = static_cast<double>(col) * spacing_m;
      v.y = static_cast<double>(row) * spacing_m;
      vertices.push_back(v);
    }
  }

  std::vector<Edge> edges;
  auto add_arcs = [&](VertexId a, VertexId b) {
    edges.push_back({static_cast<EdgeId>(edges.size()), a, b, spacing_m});
    edges.push_back({static_cast<EdgeId>(edges.size()), b, a, spacing_m});
  };
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      const auto v = static_cast<VertexId>(row * width + col);
      if (col + 1 < width) add_arcs(v, v + 1);
      if (row + 1 < height) add_arcs(v, static_cast<VertexId>(v + width));
    }
  }
  return RoadNetwork(std::move(vertices), std::move(edges));
}

void validate_scenario(const SyntheticScenario& scenario) {
  if (scenario.grid_width < 2 || scenario.grid_height < 2)
    throw ValidationError("scenario: grid must be at least 2x2");
  if (scenario.num_snapshots < 1) throw ValidationError("scenario: need at least one snapshot");
  if (scenario.noise_level < 0.0) throw ValidationError("scenario: noise level must be >= 0");
  if (!(scenario.spacing_m > 0.0) || !(scenario.base_speed_mps > 0.0))
    throw ValidationError("scenario: spacing and base speed must be > 0");
  for (const RegimeSpec& regime : scenario.regimes) {
    if (regime.begin >= regime.end || regime.end > scenario.num_snapshots)
      throw ValidationError("scenario: regime time range outside [0, n)");
    if (!(regime.slowdown > 1.0))
      throw ValidationError("scenario: slowdown factors must exceed 1");
  }
}

SyntheticData generate_synthetic(const SyntheticScenario& scenario, std::uint64_t seed) {
  validate_scenario(scenario);
  auto network = std::make_shared<const RoadNetwork>(
      make_grid_network(scenario.grid_width, scenario.grid_height, scenario.spacing_m));

  const double base_time = scenario.spacing_m / scenario.base_speed_mps;

  // Edges affected per regime: both endpoints inside the regime box.
  std::vector<std::vector<char>> affected(scenario.regimes.size(),
                                          std::vector<char>(network->num_edges(), 0));
  for (std::size_t r = 0; r < scenario.regimes.size(); ++r) {
    const RegimeSpec& regime = scenario.regimes[r];
    for (const Edge& e : network->edges()) {
      const Vertex& a = network->vertex(e.tail);
      const Vertex& b = network->vertex(e.head);
      const bool a_in = a.x >= regime.x_min && a.x <= regime.x_max && a.y >= regime.y_min &&
                        a.y <= regime.y_max;
      const bool b_in = b.x >= regime.x_min && b.x <= regime.x_max && b.y >= regime.y_min &&
                        b.y <= regime.y_max;
      if (a_in && b_in) affected[r][e.id] = 1;
    }
  }

  Rng rng(seed);
  std::vector<Snapshot> snapshots;
  std::vector<int> labels;
  snapshots.reserve(scenario.num_snapshots);
  for (std::size_t i = 0; i < scenario.num_snapshots; ++i) {
    Snapshot snap;
    snap.timestamp_s = static_cast<std::int64_t>(i) * scenario.snapshot_interval_s;
    snap.weights.assign(network->num_edges(), base_time);

    int label = static_cast<int>(scenario.regimes.size());
    for (std::size_t r = 0; r < scenario.regimes.size(); ++r) {
      if (i < scenario.regimes[r].begin || i >= scenario.regimes[r].end) continue;
      if (label == static_cast<int>(scenario.regimes.size())) label = static_cast<int>(r);
      for (EdgeId e = 0; e < network->num_edges(); ++e)
        if (affected[r][e]) snap.weights[e] *= scenario.regimes[r].slowdown;
    }
    if (scenario.noise_level > 0.0) {
      for (double& w : snap.weights) w *= std::exp(scenario.noise_level * rng.normal());
    }
    snapshots.push_back(std::move(snap));
    labels.push_back(label);
  }

  return SyntheticData{network, SnapshotSeries(network, std::move(snapshots)),
                       std::move(labels)};
}

}  // namespace roadsnap

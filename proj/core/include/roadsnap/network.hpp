#ifndef ROADSNAP_NETWORK_HPP
#define ROADSNAP_NETWORK_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "roadsnap/types.hpp"

namespace roadsnap {

struct Vertex {
  VertexId id = 0;
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

struct Edge {
  EdgeId id = 0;
  VertexId tail = 0;
  VertexId head = 0;
  double length_m = 0.0;  // static length, > 0
};

/// Immutable directed road topology. Vertex ids are dense 0..|V|-1 and edge
/// ids dense 0..|E|-1; the constructor validates both along with endpoint
/// references and positive lengths. Safe to share across threads once built.
class RoadNetwork {
 public:
  RoadNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const EdgeId> out_edges(VertexId v) const;
  std::span<const EdgeId> in_edges(VertexId v) const;

  bool valid_vertex(VertexId v) const { return v < vertices_.size(); }
  bool valid_edge(EdgeId e) const { return e < edges_.size(); }

  struct BoundingBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  };
  BoundingBox bounding_box() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  // CSR adjacency, out and in directions.
  std::vector<std::uint32_t> out_offsets_, in_offsets_;
  std::vector<EdgeId> out_edges_, in_edges_;
};

/// One static frame of the dynamic network: a travel-time weight (seconds,
/// > 0) per edge id.
struct Snapshot {
  std::int64_t timestamp_s = 0;
  std::vector<double> weights;
};

/// Timestamp-ordered snapshots over one shared topology. The constructor
/// sorts by timestamp and validates weight vectors (length |E|, finite,
/// strictly positive) and strict timestamp monotonicity.
class SnapshotSeries {
 public:
  SnapshotSeries(std::shared_ptr<const RoadNetwork> network, std::vector<Snapshot> snapshots);

  const RoadNetwork& network() const { return *network_; }
  std::shared_ptr<const RoadNetwork> network_ptr() const { return network_; }

  std::size_t size() const { return snapshots_.size(); }
  const Snapshot& at(std::size_t i) const { return snapshots_.at(i); }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }

 private:
  std::shared_ptr<const RoadNetwork> network_;
  std::vector<Snapshot> snapshots_;
};

/// Per-edge variability over a series: mean, population stddev and the
/// coefficient of variation cv = stddev / mean. cv is 0 exactly when the
/// edge weight never changes (single-snapshot series included).
struct EdgeStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> cv;
};

EdgeStats edge_stats(const SnapshotSeries& series);

/// Nearest-rank percentile of the cv distribution; used for the default
/// path-selection thresholds.
double cv_percentile(const EdgeStats& stats, double pct);

/// FNV-1a over timestamps and weight bit patterns; keys the reachability
/// cache sidecar.
std::uint64_t series_content_hash(const SnapshotSeries& series);

}  // namespace roadsnap

#endif  // ROADSNAP_NETWORK_HPP

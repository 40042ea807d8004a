#ifndef ROADSNAP_PATHFINDING_HPP
#define ROADSNAP_PATHFINDING_HPP

#include <optional>
#include <vector>

#include "roadsnap/network.hpp"
#include "roadsnap/types.hpp"

namespace roadsnap {

/// An ordered, connected edge sequence (head of edges[i] == tail of
/// edges[i+1]). Empty paths are valid and have zero travel time.
struct Path {
  std::vector<EdgeId> edges;

  bool operator==(const Path&) const = default;
};

/// Throws ValidationError unless the edge sequence is connected on the
/// network. `require_no_repeats` additionally enforces edge uniqueness
/// (typical-path candidates demand it; query paths do not).
void validate_path(const RoadNetwork& network, const Path& path, bool require_no_repeats = false);

struct RouteResult {
  double distance_s = 0.0;
  Path path;
};

/// Exact shortest travel-time path under the snapshot's weights. Ties are
/// broken toward the smallest predecessor vertex id (then smallest edge id),
/// so the returned path is deterministic. Unreachable targets yield nullopt.
std::optional<RouteResult> dijkstra(const RoadNetwork& network, const Snapshot& snapshot,
                                    VertexId source, VertexId target);

/// One-to-all distances (infinity for unreachable vertices).
std::vector<double> dijkstra_distances(const RoadNetwork& network, const Snapshot& snapshot,
                                       VertexId source);

/// { v : shortest travel time source -> v <= budget_s }, sorted by vertex id.
/// This is a weight-bounded Dijkstra, not a hop-bounded BFS; the budget is in
/// seconds. Always contains the source.
std::vector<VertexId> bounded_expansion(const RoadNetwork& network, const Snapshot& snapshot,
                                        VertexId source, double budget_s);

/// bounded_expansion plus the distance of each reached vertex; one run at a
/// large budget serves every smaller budget.
std::vector<std::pair<VertexId, double>> bounded_expansion_distances(const RoadNetwork& network,
                                                                     const Snapshot& snapshot,
                                                                     VertexId source,
                                                                     double budget_s);

/// Sum of the path's edge weights under the snapshot, accumulated in path
/// order (bit-identical to the Dijkstra accumulation along the same path).
double path_travel_time(const RoadNetwork& network, const Snapshot& snapshot, const Path& path);

}  // namespace roadsnap

#endif  // ROADSNAP_PATHFINDING_HPP

#ifndef ROADSNAP_ERROR_METRICS_HPP
#define ROADSNAP_ERROR_METRICS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "roadsnap/network.hpp"
#include "roadsnap/pathfinding.hpp"

namespace roadsnap {

/// Fixed paths (trajectory stand-ins) the error metric is evaluated over,
/// plus optional OD pairs for index-quality checks.
struct QuerySet {
  std::vector<Path> paths;
  std::vector<std::pair<VertexId, VertexId>> od_pairs;
};

/// Relative travel-time discrepancy of one path between an estimate snapshot
/// and the ground-truth snapshot: |t_est - t_truth| / t_truth. The truth
/// snapshot is always the second argument; the metric is not symmetric.
/// Throws ValidationError on an empty path (zero denominator).
double path_error(const RoadNetwork& network, const Path& path, const Snapshot& estimate,
                  const Snapshot& truth);

/// Mean of path_error over the query set's paths (pairwise-summed, so
/// chunked evaluation orders agree). Throws ValidationError on an empty set.
double snapshot_error(const RoadNetwork& network, const Snapshot& estimate, const Snapshot& truth,
                      const QuerySet& queries);

/// Desk-scale stand-in for trajectory data: `count` shortest paths on the
/// series' first snapshot between seeded random OD pairs (unreachable or
/// trivial pairs are redrawn). The OD pairs are kept alongside the paths.
QuerySet default_query_set(const SnapshotSeries& series, std::size_t count, std::uint64_t seed);

}  // namespace roadsnap

#endif  // ROADSNAP_ERROR_METRICS_HPP

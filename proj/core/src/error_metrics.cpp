#include "roadsnap/error_metrics.hpp"

#include <cmath>
#include <sstream>

#include "roadsnap/numeric.hpp"
#include "roadsnap/rng.hpp"

namespace roadsnap {

double path_error(const RoadNetwork& network, const Path& path, const Snapshot& estimate,
                  const Snapshot& truth) {
  if (path.edges.empty())
    throw ValidationError("path_error: empty path has no ground-truth travel time");
  const double t_est = path_travel_time(network, estimate, path);
  const double t_truth = path_travel_time(network, truth, path);
  return std::abs(t_est - t_truth) / t_truth;
}

double snapshot_error(const RoadNetwork& network, const Snapshot& estimate, const Snapshot& truth,
                      const QuerySet& queries) {
  if (queries.paths.empty()) throw ValidationError("snapshot_error: empty query set");
  std::vector<double> errors(queries.paths.size());
  for (std::size_t i = 0; i < queries.paths.size(); ++i)
    errors[i] = path_error(network, queries.paths[i], estimate, truth);
  return pairwise_sum(errors) / static_cast<double>(errors.size());
}

QuerySet default_query_set(const SnapshotSeries& series, std::size_t count, std::uint64_t seed) {
  const RoadNetwork& network = series.network();
  const Snapshot& base = series.at(0);
  const std::size_t nv = network.num_vertices();
  if (nv < 2) throw ValidationError("default_query_set: network too small for OD pairs");

  QuerySet qs;
  Rng rng(seed);
  const std::size_t max_attempts = count * 100 + 1000;
  std::size_t attempts = 0;
  while (qs.paths.size() < count && attempts < max_attempts) {
    ++attempts;
    const auto s = static_cast<VertexId>(rng.below(nv));
    const auto t = static_cast<VertexId>(rng.below(nv));
    if (s == t) continue;
    auto route = dijkstra(network, base, s, t);
    if (!route || route->path.edges.empty()) continue;
    qs.paths.push_back(std::move(route->path));
    qs.od_pairs.emplace_back(s, t);
  }
  if (qs.paths.size() < count) {
    std::ostringstream msg;
    msg << "default_query_set: only " << qs.paths.size() << " of " << count
        << " requested paths are realizable on this network";
    throw ValidationError(msg.str());
  }
  return qs;
}

}  // namespace roadsnap

#ifndef ROADSNAP_VERTEX_REPR_HPP
#define ROADSNAP_VERTEX_REPR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roadsnap/edge_repr.hpp"
#include "roadsnap/network.hpp"

namespace roadsnap {

/// Per (snapshot, vertex) reachable sets at travel-time budgets t0 and 2*t0.
/// One bounded expansion to 2*t0 produces both. S[i][k] is always a subset
/// of S'[i][k] and contains vertex k itself; all sets are sorted.
struct ReachabilityTable {
  double budget_s = 0.0;  // t0
  std::size_t num_snapshots = 0;
  std::size_t num_vertices = 0;
  std::vector<std::vector<std::vector<VertexId>>> s;        // [snapshot][vertex]
  std::vector<std::vector<std::vector<VertexId>>> s_prime;  // budget 2*t0
};

ReachabilityTable build_reachability(const SnapshotSeries& series, double t0_s);

/// Binary sidecar cache keyed by (series content hash, t0). load returns
/// nullopt on a missing file or key mismatch.
void save_reachability_cache(const std::string& path, std::uint64_t series_hash,
                             const ReachabilityTable& table);
std::optional<ReachabilityTable> load_reachability_cache(const std::string& path,
                                                         std::uint64_t series_hash, double t0_s);

/// b[i][k] = max_i' |S_{i'k}| / |S_{ik}|; >= 1, equal to 1 in the
/// snapshot(s) where the vertex reaches the most.
struct BlockCoefficients {
  std::vector<std::vector<double>> b;  // [snapshot][vertex]
};

BlockCoefficients block_coefficients(const ReachabilityTable& table);

/// f(v) = population cv of {b[0][v], ..., b[n-1][v]}; 0 exactly when the
/// reachable-set size never changes.
std::vector<double> traffic_fluctuation(const BlockCoefficients& coefficients);

/// Typical ("hot spot") vertices in selection order, i.e. non-increasing
/// fluctuation. truncated is set when fewer than the requested count could
/// be accepted under the coverage-disjointness rule.
struct TypicalVertexSet {
  std::vector<VertexId> vertices;
  std::vector<double> fluctuation;
  bool truncated = false;
};

/// Scans vertices by descending fluctuation (ties to the smaller id) and
/// accepts one when its coverage — the union over snapshots of its S' sets —
/// is disjoint from the coverage of everything accepted so far.
TypicalVertexSet select_typical_vertices(const ReachabilityTable& table,
                                         const std::vector<double>& fluctuation,
                                         std::size_t count);

/// [b(v_{i,k})] over the typical vertices in selection order.
FeatureVector vertex_bc_repr(std::size_t snapshot_index, const BlockCoefficients& coefficients,
                             const TypicalVertexSet& typical);

/// One snapshot as the list of t0-reachable sets of the typical vertices.
struct VertexSetRepresentation {
  std::vector<VertexId> typical_vertices;
  std::vector<std::vector<VertexId>> sets;  // aligned with typical_vertices
};

VertexSetRepresentation vertex_set_repr(std::size_t snapshot_index, const ReachabilityTable& table,
                                        const TypicalVertexSet& typical);

/// Mean over typical vertices of (1 - Jaccard(S_a, S_b)); a pseudometric in
/// [0, 1]. Throws ValidationError when the typical vertex lists differ.
double vertex_set_distance(const VertexSetRepresentation& a, const VertexSetRepresentation& b);

}  // namespace roadsnap

#endif  // ROADSNAP_VERTEX_REPR_HPP

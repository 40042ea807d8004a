#ifndef ROADSNAP_CONTRACTION_HPP
#define ROADSNAP_CONTRACTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "roadsnap/network.hpp"
#include "roadsnap/pathfinding.hpp"

namespace roadsnap {

/// Contraction-hierarchy shortest-path index over one snapshot.
///
/// Node order comes from a lazy-update heap on edge difference plus
/// contracted-neighbor count. Witness searches are exact Dijkstras on the
/// remaining overlay; when a witness search is cut off by its settle cap the
/// shortcut is added anyway, so query results never depend on the cap.
///
/// Queries run the usual bidirectional upward/downward sweeps, then unpack
/// the winning up-down path to original edge ids and re-sum the snapshot
/// weights in path order. That makes reported distances bit-identical to
/// Dijkstra on the same snapshot, which the oracle-equivalence tests check
/// with zero tolerance.
class ShortestPathIndex {
 public:
  ShortestPathIndex(const RoadNetwork& network, const Snapshot& snapshot,
                    std::int64_t snapshot_id = -1);

  std::optional<RouteResult> query(VertexId source, VertexId target) const;

  double build_time_s() const { return build_time_s_; }
  std::int64_t snapshot_id() const { return snapshot_id_; }
  std::size_t num_shortcuts() const { return num_shortcuts_; }

 private:
  struct Arc {
    VertexId from = 0;
    VertexId to = 0;
    double weight = 0.0;
    EdgeId orig = kInvalidEdge;    // original edge id; kInvalidEdge for shortcuts
    std::int32_t child1 = -1;      // shortcut constituents (arc indices)
    std::int32_t child2 = -1;
  };

  void unpack(std::int32_t arc_index, std::vector<EdgeId>& out) const;

  std::size_t num_vertices_ = 0;
  std::vector<double> weights_;  // snapshot weights, for exact re-summation
  std::vector<Arc> arcs_;
  // CSR over arcs frozen at contraction time: up_[v] holds arcs v->w with
  // rank(w) > rank(v); down_in_[v] holds arcs u->v with rank(u) > rank(v).
  std::vector<std::uint32_t> up_offsets_, down_offsets_;
  std::vector<std::int32_t> up_arcs_, down_arcs_;
  double build_time_s_ = 0.0;
  std::int64_t snapshot_id_ = -1;
  std::size_t num_shortcuts_ = 0;
};

/// Free-function spellings used by the catalog and the CLI.
ShortestPathIndex build_index(const RoadNetwork& network, const Snapshot& snapshot,
                              std::int64_t snapshot_id = -1);
std::optional<RouteResult> index_query(const ShortestPathIndex& index, VertexId source,
                                       VertexId target);

}  // namespace roadsnap

#endif  // ROADSNAP_CONTRACTION_HPP

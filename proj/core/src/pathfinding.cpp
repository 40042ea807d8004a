#include "roadsnap/pathfinding.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace roadsnap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (distance, vertex) with vertex as tiebreak: the heap order is total, so
// the settle sequence is deterministic across standard library versions.
using HeapEntry = std::pair<double, VertexId>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

struct SearchState {
  std::vector<double> dist;
  std::vector<VertexId> pred_vertex;
  std::vector<EdgeId> pred_edge;
};

// Runs Dijkstra from `source`; stops early once `target` is settled (pass
// kInvalidVertex to settle everything) or once the heap minimum exceeds
// `budget` (pass infinity to disable). Predecessor ties go to the smaller
// (vertex, edge) pair; with strictly positive weights no later relaxation
// can revisit a settled vertex at equal distance, so early exit keeps the
// tie-broken tree intact.
SearchState run_dijkstra(const RoadNetwork& network, const Snapshot& snapshot, VertexId source,
                         VertexId target, double budget) {
  const std::size_t nv = network.num_vertices();
  SearchState st;
  st.dist.assign(nv, kInf);
  st.pred_vertex.assign(nv, kInvalidVertex);
  st.pred_edge.assign(nv, kInvalidEdge);

  MinHeap heap;
  st.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > budget) break;
    if (d > st.dist[u]) continue;  // stale entry
    if (u == target) break;
    for (EdgeId eid : network.out_edges(u)) {
      const Edge& e = network.edge(eid);
      const double nd = d + snapshot.weights[eid];
      if (nd < st.dist[e.head]) {
        st.dist[e.head] = nd;
        st.pred_vertex[e.head] = u;
        st.pred_edge[e.head] = eid;
        heap.push({nd, e.head});
      } else if (nd == st.dist[e.head] &&
                 (u < st.pred_vertex[e.head] ||
                  (u == st.pred_vertex[e.head] && eid < st.pred_edge[e.head]))) {
        st.pred_vertex[e.head] = u;
        st.pred_edge[e.head] = eid;
      }
    }
  }
  return st;
}

}  // namespace

void validate_path(const RoadNetwork& network, const Path& path, bool require_no_repeats) {
  std::unordered_set<EdgeId> seen;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const EdgeId eid = path.edges[i];
    if (!network.valid_edge(eid)) {
      std::ostringstream msg;
      msg << "path references unknown edge " << eid;
      throw ValidationError(msg.str());
    }
    if (i > 0) {
      const Edge& prev = network.edge(path.edges[i - 1]);
      const Edge& cur = network.edge(eid);
      if (prev.head != cur.tail) {
        std::ostringstream msg;
        msg << "path is disconnected between edge " << prev.id << " and edge " << cur.id;
        throw ValidationError(msg.str());
      }
    }
    if (require_no_repeats && !seen.insert(eid).second) {
      std::ostringstream msg;
      msg << "path repeats edge " << eid;
      throw ValidationError(msg.str());
    }
  }
}

std::optional<RouteResult> dijkstra(const RoadNetwork& network, const Snapshot& snapshot,
                                    VertexId source, VertexId target) {
  if (!network.valid_vertex(source) || !network.valid_vertex(target))
    throw ValidationError("dijkstra: invalid vertex id");
  if (source == target) return RouteResult{0.0, {}};

  const SearchState st = run_dijkstra(network, snapshot, source, target, kInf);
  if (st.dist[target] == kInf) return std::nullopt;

  RouteResult result;
  result.distance_s = st.dist[target];
  for (VertexId v = target; v != source; v = st.pred_vertex[v])
    result.path.edges.push_back(st.pred_edge[v]);
  std::reverse(result.path.edges.begin(), result.path.edges.end());
  return result;
}

std::vector<double> dijkstra_distances(const RoadNetwork& network, const Snapshot& snapshot,
                                       VertexId source) {
  if (!network.valid_vertex(source)) throw ValidationError("dijkstra: invalid vertex id");
  return run_dijkstra(network, snapshot, source, kInvalidVertex, kInf).dist;
}

std::vector<VertexId> bounded_expansion(const RoadNetwork& network, const Snapshot& snapshot,
                                        VertexId source, double budget_s) {
  if (!network.valid_vertex(source)) throw ValidationError("bounded_expansion: invalid vertex id");
  if (!(budget_s > 0.0)) throw std::invalid_argument("bounded_expansion: budget must be > 0");
  const SearchState st = run_dijkstra(network, snapshot, source, kInvalidVertex, budget_s);
  std::vector<VertexId> result;
  for (VertexId v = 0; v < network.num_vertices(); ++v)
    if (st.dist[v] <= budget_s) result.push_back(v);
  return result;
}

std::vector<std::pair<VertexId, double>> bounded_expansion_distances(const RoadNetwork& network,
                                                                     const Snapshot& snapshot,
                                                                     VertexId source,
                                                                     double budget_s) {
  if (!network.valid_vertex(source)) throw ValidationError("bounded_expansion: invalid vertex id");
  if (!(budget_s > 0.0)) throw std::invalid_argument("bounded_expansion: budget must be > 0");
  const SearchState st = run_dijkstra(network, snapshot, source, kInvalidVertex, budget_s);
  std::vector<std::pair<VertexId, double>> result;
  for (VertexId v = 0; v < network.num_vertices(); ++v)
    if (st.dist[v] <= budget_s) result.emplace_back(v, st.dist[v]);
  return result;
}

double path_travel_time(const RoadNetwork& network, const Snapshot& snapshot, const Path& path) {
  validate_path(network, path);
  double total = 0.0;
  for (EdgeId eid : path.edges) total += snapshot.weights[eid];
  return total;
}

}  // namespace roadsnap

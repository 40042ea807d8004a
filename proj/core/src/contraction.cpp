#include "roadsnap/contraction.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <queue>

namespace roadsnap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kWitnessSettleCap = 256;

// Overlay graph mutated during contraction. Adjacency is a map keyed by
// neighbor id so iteration order (and therefore the whole build) is
// deterministic. At most one arc per (from, to) pair is kept: the lightest,
// ties to the earlier arc.
struct Overlay {
  std::vector<std::map<VertexId, std::int32_t>> out, in;
};

}  // namespace

ShortestPathIndex::ShortestPathIndex(const RoadNetwork& network, const Snapshot& snapshot,
                                     std::int64_t snapshot_id)
    : num_vertices_(network.num_vertices()),
      weights_(snapshot.weights),
      snapshot_id_(snapshot_id) {
  const auto t_start = std::chrono::steady_clock::now();

  Overlay overlay;
  overlay.out.resize(num_vertices_);
  overlay.in.resize(num_vertices_);

  auto upsert_arc = [&](VertexId from, VertexId to, double weight, EdgeId orig,
                        std::int32_t child1, std::int32_t child2) {
    auto it = overlay.out[from].find(to);
    if (it != overlay.out[from].end()) {
      Arc& existing = arcs_[it->second];
      if (existing.weight <= weight) return;
      existing.weight = weight;
      existing.orig = orig;
      existing.child1 = child1;
      existing.child2 = child2;
      return;
    }
    const auto idx = static_cast<std::int32_t>(arcs_.size());
    arcs_.push_back({from, to, weight, orig, child1, child2});
    overlay.out[from].emplace(to, idx);
    overlay.in[to].emplace(from, idx);
  };

  for (const Edge& e : network.edges()) {
    if (e.tail == e.head) continue;  // self loops never lie on a shortest path
    upsert_arc(e.tail, e.head, snapshot.weights[e.id], e.id, -1, -1);
  }

  std::vector<bool> contracted(num_vertices_, false);
  std::vector<int> contracted_neighbors(num_vertices_, 0);
  std::vector<std::uint32_t> rank(num_vertices_, 0);

  struct Shortcut {
    VertexId from, to;
    double weight;
    std::int32_t child1, child2;
  };

  // Witness scratch, version-stamped to avoid reallocation per search.
  std::vector<double> wdist(num_vertices_, kInf);
  std::vector<std::uint32_t> wstamp(num_vertices_, 0);
  std::uint32_t wversion = 0;

  // Shortcuts required to contract v right now. Exact unless the settle cap
  // trips, in which case extra (harmless) shortcuts are kept.
  auto simulate = [&](VertexId v, std::vector<Shortcut>* out_shortcuts) -> int {
    int count = 0;
    for (const auto& [u, arc_uv] : overlay.in[v]) {
      if (contracted[u]) continue;
      const double w_uv = arcs_[arc_uv].weight;

      double limit = 0.0;
      std::size_t n_targets = 0;
      for (const auto& [w, arc_vw] : overlay.out[v]) {
        if (contracted[w] || w == u) continue;
        limit = std::max(limit, w_uv + arcs_[arc_vw].weight);
        ++n_targets;
      }
      if (n_targets == 0) continue;

      ++wversion;
      auto dist_of = [&](VertexId x) { return wstamp[x] == wversion ? wdist[x] : kInf; };
      auto set_dist = [&](VertexId x, double d) {
        wstamp[x] = wversion;
        wdist[x] = d;
      };

      using HeapEntry = std::pair<double, VertexId>;
      std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
      set_dist(u, 0.0);
      heap.push({0.0, u});
      std::size_t settled = 0;
      while (!heap.empty() && settled < kWitnessSettleCap) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (d > limit) break;
        if (d > dist_of(x)) continue;
        ++settled;
        for (const auto& [y, arc_xy] : overlay.out[x]) {
          if (contracted[y] || y == v) continue;
          const double nd = d + arcs_[arc_xy].weight;
          if (nd < dist_of(y)) {
            set_dist(y, nd);
            heap.push({nd, y});
          }
        }
      }

      for (const auto& [w, arc_vw] : overlay.out[v]) {
        if (contracted[w] || w == u) continue;
        const double via = w_uv + arcs_[arc_vw].weight;
        if (dist_of(w) <= via) continue;  // confirmed witness
        ++count;
        if (out_shortcuts) out_shortcuts->push_back({u, w, via, arc_uv, arc_vw});
      }
    }
    return count;
  };

  auto priority_of = [&](VertexId v) -> int {
    int degree = 0;
    for (const auto& [u, _] : overlay.in[v])
      if (!contracted[u]) ++degree;
    for (const auto& [w, _] : overlay.out[v])
      if (!contracted[w]) ++degree;
    return simulate(v, nullptr) - degree + contracted_neighbors[v];
  };

  using PqEntry = std::pair<int, VertexId>;
  std::priority_queue<PqEntry, std::vector<PqEntry>, std::greater<>> queue;
  for (VertexId v = 0; v < num_vertices_; ++v) queue.push({priority_of(v), v});

  up_offsets_.assign(num_vertices_ + 1, 0);
  down_offsets_.assign(num_vertices_ + 1, 0);
  std::vector<std::vector<std::int32_t>> up_lists(num_vertices_), down_lists(num_vertices_);

  std::uint32_t next_rank = 0;
  while (!queue.empty()) {
    const auto [stale_priority, v] = queue.top();
    queue.pop();
    if (contracted[v]) continue;
    const int fresh = priority_of(v);
    if (!queue.empty() && PqEntry{fresh, v} > queue.top()) {
      queue.push({fresh, v});
      continue;
    }

    std::vector<Shortcut> shortcuts;
    simulate(v, &shortcuts);
    for (const Shortcut& sc : shortcuts) {
      upsert_arc(sc.from, sc.to, sc.weight, kInvalidEdge, sc.child1, sc.child2);
      ++num_shortcuts_;
    }

    // Freeze v's incident arcs: every remaining neighbor outranks v.
    for (const auto& [w, arc_vw] : overlay.out[v])
      if (!contracted[w]) up_lists[v].push_back(arc_vw);
    for (const auto& [u, arc_uv] : overlay.in[v])
      if (!contracted[u]) down_lists[v].push_back(arc_uv);

    contracted[v] = true;
    rank[v] = next_rank++;
    for (const auto& [u, _] : overlay.in[v])
      if (!contracted[u]) ++contracted_neighbors[u];
    for (const auto& [w, _] : overlay.out[v])
      if (!contracted[w]) ++contracted_neighbors[w];
  }

  for (VertexId v = 0; v < num_vertices_; ++v) {
    up_offsets_[v + 1] = up_offsets_[v] + static_cast<std::uint32_t>(up_lists[v].size());
    down_offsets_[v + 1] = down_offsets_[v] + static_cast<std::uint32_t>(down_lists[v].size());
  }
  up_arcs_.reserve(up_offsets_.back());
  down_arcs_.reserve(down_offsets_.back());
  for (VertexId v = 0; v < num_vertices_; ++v) {
    up_arcs_.insert(up_arcs_.end(), up_lists[v].begin(), up_lists[v].end());
    down_arcs_.insert(down_arcs_.end(), down_lists[v].begin(), down_lists[v].end());
  }

  build_time_s_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
}

void ShortestPathIndex::unpack(std::int32_t arc_index, std::vector<EdgeId>& out) const {
  const Arc& arc = arcs_[arc_index];
  if (arc.orig != kInvalidEdge) {
    out.push_back(arc.orig);
    return;
  }
  unpack(arc.child1, out);
  unpack(arc.child2, out);
}

std::optional<RouteResult> ShortestPathIndex::query(VertexId source, VertexId target) const {
  if (source >= num_vertices_ || target >= num_vertices_)
    throw ValidationError("index_query: invalid vertex id");
  if (source == target) return RouteResult{0.0, {}};

  // Forward sweep over up_ arcs and backward sweep over down_in_ arcs. The
  // cones are tiny, so both run to exhaustion; no stopping heuristics to
  // reason about.
  struct Sweep {
    std::vector<double> dist;
    std::vector<std::int32_t> pred_arc;
    std::vector<VertexId> touched;
  };
  auto run = [&](VertexId start, bool forward) {
    Sweep sw;
    sw.dist.assign(num_vertices_, kInf);
    sw.pred_arc.assign(num_vertices_, -1);
    using HeapEntry = std::pair<double, VertexId>;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
    sw.dist[start] = 0.0;
    sw.touched.push_back(start);
    heap.push({0.0, start});
    while (!heap.empty()) {
      const auto [d, x] = heap.top();
      heap.pop();
      if (d > sw.dist[x]) continue;
      const auto& offsets = forward ? up_offsets_ : down_offsets_;
      const auto& arc_ids = forward ? up_arcs_ : down_arcs_;
      for (std::uint32_t i = offsets[x]; i < offsets[x + 1]; ++i) {
        const Arc& arc = arcs_[arc_ids[i]];
        const VertexId y = forward ? arc.to : arc.from;
        const double nd = d + arc.weight;
        if (nd < sw.dist[y]) {
          sw.dist[y] = nd;
          if (sw.pred_arc[y] == -1) sw.touched.push_back(y);
          sw.pred_arc[y] = arc_ids[i];
          heap.push({nd, y});
        }
      }
    }
    return sw;
  };

  const Sweep fwd = run(source, true);
  const Sweep bwd = run(target, false);

  double best = kInf;
  VertexId meet = kInvalidVertex;
  for (VertexId x : fwd.touched) {
    if (bwd.dist[x] == kInf) continue;
    const double total = fwd.dist[x] + bwd.dist[x];
    if (total < best || (total == best && x < meet)) {
      best = total;
      meet = x;
    }
  }
  if (meet == kInvalidVertex) return std::nullopt;

  RouteResult result;
  {
    // Forward pred arcs point meet-ward; collect then emit source-to-meet.
    std::vector<std::int32_t> chain;
    for (VertexId x = meet; x != source;) {
      chain.push_back(fwd.pred_arc[x]);
      x = arcs_[fwd.pred_arc[x]].from;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) unpack(*it, result.path.edges);
    // Backward pred arcs already sit in forward orientation meet-to-target.
    for (VertexId x = meet; x != target;) {
      unpack(bwd.pred_arc[x], result.path.edges);
      x = arcs_[bwd.pred_arc[x]].to;
    }
  }

  // Re-sum in path order so the distance is bit-identical to Dijkstra's
  // accumulation along the same edges.
  double total = 0.0;
  for (EdgeId e : result.path.edges) total += weights_[e];
  result.distance_s = total;
  return result;
}

ShortestPathIndex build_index(const RoadNetwork& network, const Snapshot& snapshot,
                              std::int64_t snapshot_id) {
  return ShortestPathIndex(network, snapshot, snapshot_id);
}

std::optional<RouteResult> index_query(const ShortestPathIndex& index, VertexId source,
                                       VertexId target) {
  return index.query(source, target);
}

}  // namespace roadsnap

#include "roadsnap/vertex_repr.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>

#include "roadsnap/numeric.hpp"
#include "roadsnap/pathfinding.hpp"

namespace roadsnap {

ReachabilityTable build_reachability(const SnapshotSeries& series, double t0_s) {
  if (!(t0_s > 0.0)) throw std::invalid_argument("build_reachability: t0 must be > 0");
  const RoadNetwork& network = series.network();
  ReachabilityTable table;
  table.budget_s = t0_s;
  table.num_snapshots = series.size();
  table.num_vertices = network.num_vertices();
  table.s.resize(table.num_snapshots);
  table.s_prime.resize(table.num_snapshots);

  for (std::size_t i = 0; i < table.num_snapshots; ++i) {
    const Snapshot& snap = series.at(i);
    table.s[i].resize(table.num_vertices);
    table.s_prime[i].resize(table.num_vertices);
    for (VertexId v = 0; v < table.num_vertices; ++v) {
      // One expansion to 2*t0 yields both budgets.
      for (const auto& [u, dist] : bounded_expansion_distances(network, snap, v, 2.0 * t0_s)) {
        table.s_prime[i][v].push_back(u);
        if (dist <= t0_s) table.s[i][v].push_back(u);
      }
    }
  }
  return table;
}

BlockCoefficients block_coefficients(const ReachabilityTable& table) {
  BlockCoefficients out;
  out.b.assign(table.num_snapshots, std::vector<double>(table.num_vertices, 1.0));
  for (VertexId v = 0; v < table.num_vertices; ++v) {
    std::size_t max_reach = 0;
    for (std::size_t i = 0; i < table.num_snapshots; ++i)
      max_reach = std::max(max_reach, table.s[i][v].size());
    for (std::size_t i = 0; i < table.num_snapshots; ++i)
      out.b[i][v] = static_cast<double>(max_reach) / static_cast<double>(table.s[i][v].size());
  }
  return out;
}

std::vector<double> traffic_fluctuation(const BlockCoefficients& coefficients) {
  const std::size_t n = coefficients.b.size();
  if (n == 0) throw std::invalid_argument("traffic_fluctuation: empty block coefficients");
  const std::size_t nv = coefficients.b[0].size();
  std::vector<double> f(nv, 0.0);
  std::vector<double> column(n);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i < n; ++i) column[i] = coefficients.b[i][v];
    const MeanStddev ms = population_stats(column);
    f[v] = ms.stddev == 0.0 ? 0.0 : ms.stddev / ms.mean;
  }
  return f;
}

TypicalVertexSet select_typical_vertices(const ReachabilityTable& table,
                                         const std::vector<double>& fluctuation,
                                         std::size_t count) {
  if (count < 1) throw std::invalid_argument("select_typical_vertices: count must be >= 1");
  if (fluctuation.size() != table.num_vertices)
    throw ValidationError("select_typical_vertices: fluctuation size mismatch");

  std::vector<VertexId> order(table.num_vertices);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    if (fluctuation[a] != fluctuation[b]) return fluctuation[a] > fluctuation[b];
    return a < b;
  });

  TypicalVertexSet result;
  std::vector<char> covered(table.num_vertices, 0);
  for (VertexId v : order) {
    if (result.vertices.size() >= count) break;
    bool overlaps = false;
    for (std::size_t i = 0; i < table.num_snapshots && !overlaps; ++i)
      for (VertexId u : table.s_prime[i][v])
        if (covered[u]) {
          overlaps = true;
          break;
        }
    if (overlaps) continue;
    for (std::size_t i = 0; i < table.num_snapshots; ++i)
      for (VertexId u : table.s_prime[i][v]) covered[u] = 1;
    result.vertices.push_back(v);
    result.fluctuation.push_back(fluctuation[v]);
  }
  result.truncated = result.vertices.size() < count;
  return result;
}

FeatureVector vertex_bc_repr(std::size_t snapshot_index, const BlockCoefficients& coefficients,
                             const TypicalVertexSet& typical) {
  if (snapshot_index >= coefficients.b.size())
    throw std::invalid_argument("vertex_bc_repr: snapshot index out of range");
  FeatureVector out;
  out.method_tag = "vertex-bc";
  out.values.reserve(typical.vertices.size());
  for (VertexId v : typical.vertices) out.values.push_back(coefficients.b[snapshot_index][v]);
  return out;
}

VertexSetRepresentation vertex_set_repr(std::size_t snapshot_index, const ReachabilityTable& table,
                                        const TypicalVertexSet& typical) {
  if (snapshot_index >= table.num_snapshots)
    throw std::invalid_argument("vertex_set_repr: snapshot index out of range");
  VertexSetRepresentation out;
  out.typical_vertices = typical.vertices;
  out.sets.reserve(typical.vertices.size());
  for (VertexId v : typical.vertices) out.sets.push_back(table.s[snapshot_index][v]);
  return out;
}

namespace {

// Jaccard of two sorted vertex sets.
double sorted_jaccard(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::size_t inter = 0, ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) {
      ++inter;
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 1.0;  // both empty: identical
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double vertex_set_distance(const VertexSetRepresentation& a, const VertexSetRepresentation& b) {
  if (a.typical_vertices != b.typical_vertices)
    throw ValidationError("vertex_set_distance: representations use different typical vertices");
  if (a.sets.empty()) throw ValidationError("vertex_set_distance: empty representation");
  std::vector<double> dist(a.sets.size());
  for (std::size_t k = 0; k < a.sets.size(); ++k)
    dist[k] = 1.0 - sorted_jaccard(a.sets[k], b.sets[k]);
  return pairwise_sum(dist) / static_cast<double>(dist.size());
}

namespace {

constexpr char kCacheMagic[8] = {'R', 'S', 'R', 'E', 'A', 'C', 'H', '1'};

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return static_cast<bool>(in);
}

void put_sets(std::ofstream& out, const std::vector<std::vector<std::vector<VertexId>>>& sets) {
  for (const auto& per_snapshot : sets) {
    for (const auto& set : per_snapshot) {
      put(out, static_cast<std::uint32_t>(set.size()));
      out.write(reinterpret_cast<const char*>(set.data()),
                static_cast<std::streamsize>(set.size() * sizeof(VertexId)));
    }
  }
}

bool get_sets(std::ifstream& in, std::size_t n, std::size_t nv,
              std::vector<std::vector<std::vector<VertexId>>>& sets) {
  sets.assign(n, std::vector<std::vector<VertexId>>(nv));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t v = 0; v < nv; ++v) {
      std::uint32_t size = 0;
      if (!get(in, size)) return false;
      sets[i][v].resize(size);
      in.read(reinterpret_cast<char*>(sets[i][v].data()),
              static_cast<std::streamsize>(size * sizeof(VertexId)));
      if (!in) return false;
    }
  }
  return true;
}

}  // namespace

void save_reachability_cache(const std::string& path, std::uint64_t series_hash,
                             const ReachabilityTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open reachability cache for writing: " + path);
  out.write(kCacheMagic, sizeof(kCacheMagic));
  put(out, series_hash);
  put(out, table.budget_s);
  put(out, static_cast<std::uint64_t>(table.num_snapshots));
  put(out, static_cast<std::uint64_t>(table.num_vertices));
  put_sets(out, table.s);
  put_sets(out, table.s_prime);
  if (!out) throw ValidationError("failed writing reachability cache: " + path);
}

std::optional<ReachabilityTable> load_reachability_cache(const std::string& path,
                                                         std::uint64_t series_hash, double t0_s) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) return std::nullopt;
  std::uint64_t hash = 0;
  double budget = 0.0;
  std::uint64_t n = 0, nv = 0;
  if (!get(in, hash) || !get(in, budget) || !get(in, n) || !get(in, nv)) return std::nullopt;
  if (hash != series_hash || budget != t0_s) return std::nullopt;
  ReachabilityTable table;
  table.budget_s = budget;
  table.num_snapshots = n;
  table.num_vertices = nv;
  if (!get_sets(in, n, nv, table.s) || !get_sets(in, n, nv, table.s_prime)) return std::nullopt;
  return table;
}

}  // namespace roadsnap

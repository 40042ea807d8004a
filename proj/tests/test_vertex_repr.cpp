#include "roadsnap/vertex_repr.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "roadsnap/synthetic.hpp"
#include "testutil.hpp"

namespace roadsnap {
namespace {

using test::bfs_hops;
using test::uniform_snapshot;

SnapshotSeries two_snapshot_star(std::shared_ptr<const RoadNetwork>* out_net) {
  // center 0 with 9 spokes; snapshot 0 reaches all spokes, snapshot 1 only 4
  std::vector<Vertex> vertices;
  for (VertexId v = 0; v < 10; ++v) vertices.push_back({v, static_cast<double>(v), 0.0});
  std::vector<Edge> edges;
  for (VertexId spoke = 1; spoke < 10; ++spoke)
    edges.push_back({static_cast<EdgeId>(spoke - 1), 0, spoke, 100.0});
  auto net = std::make_shared<const RoadNetwork>(RoadNetwork(std::move(vertices), std::move(edges)));
  *out_net = net;

  Snapshot fast{0, std::vector<double>(net->num_edges(), 10.0)};
  Snapshot congested{300, std::vector<double>(net->num_edges(), 10.0)};
  for (EdgeId e = 4; e < 9; ++e) congested.weights[e] = 1000.0;  // 5 spokes blocked
  return SnapshotSeries(net, {fast, congested});
}

TEST(BuildReachability, IsolatedVertexReachesOnlyItself) {
  std::vector<Vertex> vertices{{0, 0, 0}, {1, 1, 0}, {2, 2, 0}};
  std::vector<Edge> edges{{0, 0, 1, 100.0}};
  auto net = std::make_shared<const RoadNetwork>(RoadNetwork(std::move(vertices), std::move(edges)));
  const SnapshotSeries series(net, {uniform_snapshot(*net, 5.0)});
  const ReachabilityTable table = build_reachability(series, 120.0);
  EXPECT_EQ(table.s[0][2], std::vector<VertexId>{2});
  EXPECT_EQ(table.s_prime[0][2], std::vector<VertexId>{2});
}

TEST(BuildReachability, MatchesBfsDepthOnUniformGrid) {
  auto net = test::shared_grid(10, 10);
  const SnapshotSeries series(net, {uniform_snapshot(*net, 60.0)});
  const ReachabilityTable table = build_reachability(series, 120.0);  // t0 = 2 hops, 2t0 = 4
  for (VertexId v : {0u, 37u, 99u}) {
    const std::vector<int> hops = bfs_hops(*net, v);
    const auto within = [&](int depth) {
      return static_cast<std::size_t>(
          std::count_if(hops.begin(), hops.end(), [&](int h) { return h >= 0 && h <= depth; }));
    };
    EXPECT_EQ(table.s[0][v].size(), within(2));
    EXPECT_EQ(table.s_prime[0][v].size(), within(4));
  }
}

TEST(BuildReachability, SubsetAndMembershipInvariants) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(4, 0.05), 3);
  const ReachabilityTable table = build_reachability(data.series, 120.0);
  for (std::size_t i = 0; i < table.num_snapshots; ++i) {
    for (VertexId v = 0; v < table.num_vertices; ++v) {
      EXPECT_TRUE(std::binary_search(table.s[i][v].begin(), table.s[i][v].end(), v));
      EXPECT_TRUE(std::includes(table.s_prime[i][v].begin(), table.s_prime[i][v].end(),
                                table.s[i][v].begin(), table.s[i][v].end()));
    }
  }
}

TEST(ReachabilityCache, RoundTripsAndChecksKey) {
  const std::string dir = test::scratch_dir("cache");
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(3, 0.02), 5);
  const ReachabilityTable table = build_reachability(data.series, 120.0);
  const std::uint64_t hash = series_content_hash(data.series);
  const std::string path = dir + "/table.reach";
  save_reachability_cache(path, hash, table);

  const auto loaded = load_reachability_cache(path, hash, 120.0);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(loaded->s, table.s);
  EXPECT_EQ(loaded->s_prime, table.s_prime);
  EXPECT_EQ(loaded->budget_s, table.budget_s);

  EXPECT_FALSE(load_reachability_cache(path, hash + 1, 120.0).has_value());
  EXPECT_FALSE(load_reachability_cache(path, hash, 60.0).has_value());
  EXPECT_FALSE(load_reachability_cache(dir + "/missing.reach", hash, 120.0).has_value());
}

TEST(BlockCoefficients, EqualSizesGiveExactlyOne) {
  auto net = test::shared_grid(5, 5);
  const SnapshotSeries series(net, {uniform_snapshot(*net, 50.0, 0),
                                    uniform_snapshot(*net, 50.0, 300)});
  const BlockCoefficients bc = block_coefficients(build_reachability(series, 120.0));
  for (std::size_t i = 0; i < bc.b.size(); ++i)
    for (double b : bc.b[i]) EXPECT_EQ(b, 1.0);
}

TEST(BlockCoefficients, DirectFormula) {
  std::shared_ptr<const RoadNetwork> net;
  const SnapshotSeries series = two_snapshot_star(&net);
  const ReachabilityTable table = build_reachability(series, 50.0);
  ASSERT_EQ(table.s[0][0].size(), 10u);  // center + 9 spokes
  ASSERT_EQ(table.s[1][0].size(), 5u);   // center + 4 open spokes
  const BlockCoefficients bc = block_coefficients(table);
  EXPECT_EQ(bc.b[0][0], 1.0);
  EXPECT_EQ(bc.b[1][0], 2.0);  // max(10,5)/5
}

TEST(BlockCoefficients, AlwaysAtLeastOneWithEqualityAttained) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(6, 0.05), 9);
  const ReachabilityTable table = build_reachability(data.series, 120.0);
  const BlockCoefficients bc = block_coefficients(table);
  for (VertexId v = 0; v < table.num_vertices; ++v) {
    bool equality = false;
    for (std::size_t i = 0; i < table.num_snapshots; ++i) {
      EXPECT_GE(bc.b[i][v], 1.0);
      if (bc.b[i][v] == 1.0) equality = true;
    }
    EXPECT_TRUE(equality) << "vertex " << v;
  }
}

TEST(TrafficFluctuation, ConstantAndTwoPointCases) {
  BlockCoefficients bc;
  bc.b = {{1.0, 1.0}, {1.0, 2.0}};  // vertex 0 constant, vertex 1 = {1, 2}
  const std::vector<double> f = traffic_fluctuation(bc);
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[1], 0.5 / 1.5);  // sigma/mu of {1,2}
}

TEST(TrafficFluctuation, InvariantUnderSnapshotReordering) {
  BlockCoefficients forward, backward;
  forward.b = {{1.0, 1.2}, {1.5, 1.0}, {2.0, 1.1}};
  backward.b = {forward.b[2], forward.b[0], forward.b[1]};
  EXPECT_EQ(traffic_fluctuation(forward), traffic_fluctuation(backward));
}

TEST(TrafficFluctuation, ZeroExactlyForConstantReachSize) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(5, 0.03), 13);
  const ReachabilityTable table = build_reachability(data.series, 120.0);
  const std::vector<double> f = traffic_fluctuation(block_coefficients(table));
  for (VertexId v = 0; v < table.num_vertices; ++v) {
    bool constant = true;
    for (std::size_t i = 1; i < table.num_snapshots; ++i)
      constant = constant && table.s[i][v].size() == table.s[0][v].size();
    EXPECT_EQ(f[v] == 0.0, constant) << "vertex " << v;
  }
}

TEST(SelectTypicalVertices, ExclusionDropsOverlappingCoverage) {
  std::shared_ptr<const RoadNetwork> net;
  const SnapshotSeries series = two_snapshot_star(&net);
  const ReachabilityTable table = build_reachability(series, 50.0);
  const std::vector<double> f = traffic_fluctuation(block_coefficients(table));
  // the center's coverage spans everything, so after picking the best-f
  // vertex whose coverage includes the center, nothing else fits
  const TypicalVertexSet typical = select_typical_vertices(table, f, 5);
  EXPECT_EQ(typical.vertices.size(), 1u);
  EXPECT_TRUE(typical.truncated);
}

TEST(SelectTypicalVertices, DisjointSingletonsPickTopByFluctuation) {
  // no edges: every coverage is the vertex itself
  std::vector<Vertex> vertices{{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
  std::vector<Edge> edges;
  auto net = std::make_shared<const RoadNetwork>(RoadNetwork(std::move(vertices), std::move(edges)));
  ReachabilityTable table;
  table.budget_s = 10.0;
  table.num_snapshots = 1;
  table.num_vertices = 4;
  table.s = {{{0}, {1}, {2}, {3}}};
  table.s_prime = table.s;
  const std::vector<double> f{0.1, 0.9, 0.5, 0.9};
  const TypicalVertexSet typical = select_typical_vertices(table, f, 3);
  // descending f, ties to the smaller id
  EXPECT_EQ(typical.vertices, (std::vector<VertexId>{1, 3, 2}));
  EXPECT_FALSE(typical.truncated);
}

TEST(SelectTypicalVertices, CoverageOfSelectedVerticesIsDisjoint) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(4, 0.05), 17);
  const ReachabilityTable table = build_reachability(data.series, 120.0);
  const std::vector<double> f = traffic_fluctuation(block_coefficients(table));
  const TypicalVertexSet typical = select_typical_vertices(table, f, 50);
  std::vector<int> covered(table.num_vertices, 0);
  for (VertexId v : typical.vertices) {
    for (std::size_t i = 0; i < table.num_snapshots; ++i) {
      for (VertexId u : table.s_prime[i][v]) {
        // a vertex may repeat across snapshots of the same typical vertex,
        // but never across two different typical vertices
        if (covered[u]) EXPECT_EQ(covered[u], 1 + static_cast<int>(v)) << "vertex " << u;
        covered[u] = 1 + static_cast<int>(v);
      }
    }
  }
  // selection order is non-increasing fluctuation
  for (std::size_t i = 1; i < typical.fluctuation.size(); ++i)
    EXPECT_GE(typical.fluctuation[i - 1], typical.fluctuation[i]);
}

TEST(VertexReprs, BcVectorAndSetRepresentation) {
  std::shared_ptr<const RoadNetwork> net;
  const SnapshotSeries series = two_snapshot_star(&net);
  const ReachabilityTable table = build_reachability(series, 50.0);
  const BlockCoefficients bc = block_coefficients(table);
  const std::vector<double> f = traffic_fluctuation(bc);
  const TypicalVertexSet typical = select_typical_vertices(table, f, 1);
  ASSERT_EQ(typical.vertices.size(), 1u);

  const FeatureVector snapshot0 = vertex_bc_repr(0, bc, typical);
  EXPECT_EQ(snapshot0.dimension(), 1u);
  EXPECT_EQ(snapshot0.values[0], 1.0);  // snapshot 0 attains every maximum

  const VertexSetRepresentation sets0 = vertex_set_repr(0, table, typical);
  const VertexSetRepresentation sets1 = vertex_set_repr(1, table, typical);
  EXPECT_EQ(sets0.sets.size(), 1u);
  EXPECT_EQ(vertex_set_distance(sets0, sets0), 0.0);
  EXPECT_GT(vertex_set_distance(sets0, sets1), 0.0);
}

TEST(VertexSetDistance, HandComputedAndDegenerateCases) {
  VertexSetRepresentation a, b;
  a.typical_vertices = {0, 1};
  b.typical_vertices = {0, 1};
  a.sets = {{0, 1}, {5, 6}};
  b.sets = {{0, 1}, {6, 7}};  // jaccards: 1.0 and 1/3
  EXPECT_EQ(vertex_set_distance(a, b), (0.0 + (1.0 - 1.0 / 3.0)) / 2.0);

  b.sets = {{0, 1}, {5, 6}};
  EXPECT_EQ(vertex_set_distance(a, b), 0.0);

  VertexSetRepresentation disjoint = b;
  disjoint.sets = {{2, 3}, {8, 9}};
  EXPECT_EQ(vertex_set_distance(a, disjoint), 1.0);

  // per-vertex jaccards {1.0, 0.5} -> mean distance 0.25
  VertexSetRepresentation half = b;
  half.sets = {{0, 1}, {5, 8}};
  EXPECT_EQ(vertex_set_distance(a, half), 0.25);

  VertexSetRepresentation mismatched = b;
  mismatched.typical_vertices = {0, 2};
  EXPECT_THROW(vertex_set_distance(a, mismatched), ValidationError);
}

TEST(VertexSetDistance, IsAPseudometricOnRandomTriples) {
  Rng rng(23);
  auto random_repr = [&rng]() {
    VertexSetRepresentation repr;
    repr.typical_vertices = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
      std::vector<VertexId> set;
      for (VertexId v = 0; v < 12; ++v)
        if (rng.uniform01() < 0.5) set.push_back(v);
      if (set.empty()) set.push_back(0);
      repr.sets.push_back(std::move(set));
    }
    return repr;
  };
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_repr();
    const auto b = random_repr();
    const auto c = random_repr();
    const double ab = vertex_set_distance(a, b);
    const double ba = vertex_set_distance(b, a);
    EXPECT_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(vertex_set_distance(a, a), 0.0);
    EXPECT_LE(vertex_set_distance(a, c), ab + vertex_set_distance(b, c) + 1e-12);
  }
}

}  // namespace
}  // namespace roadsnap

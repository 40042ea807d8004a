#include "roadsnap/synthetic.hpp"

#include <gtest/gtest.h>

#include "roadsnap/error_metrics.hpp"
#include "roadsnap/io.hpp"
#include "testutil.hpp"

namespace roadsnap {
namespace {

TEST(GenerateSynthetic, NoiselessSingleRegimeGivesIdenticalSnapshots) {
  SyntheticScenario scenario;
  scenario.grid_width = 5;
  scenario.grid_height = 5;
  scenario.num_snapshots = 6;
  scenario.noise_level = 0.0;
  scenario.regimes = {{0, 6, 0.0, 0.0, 2000.0, 2000.0, 2.0}};
  const SyntheticData data = generate_synthetic(scenario, 1);
  ASSERT_EQ(data.series.size(), 6u);
  for (std::size_t i = 1; i < 6; ++i)
    EXPECT_EQ(data.series.at(i).weights, data.series.at(0).weights);
  for (int label : data.regime_labels) EXPECT_EQ(label, 0);
}

TEST(GenerateSynthetic, ThreeDisjointRegimesGiveThreeDistinctWeightVectors) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(12, 0.0, 4, 8), 2);
  EXPECT_EQ(data.regime_labels,
            (std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2}));
  // identical within a regime: pairwise snapshot error is exactly 0
  const QuerySet queries = default_query_set(data.series, 30, 3);
  const RoadNetwork& net = data.series.network();
  EXPECT_EQ(snapshot_error(net, data.series.at(0), data.series.at(3), queries), 0.0);
  EXPECT_EQ(snapshot_error(net, data.series.at(4), data.series.at(7), queries), 0.0);
  EXPECT_GT(snapshot_error(net, data.series.at(0), data.series.at(4), queries), 0.0);
  // three distinct vectors overall
  EXPECT_NE(data.series.at(0).weights, data.series.at(4).weights);
  EXPECT_NE(data.series.at(4).weights, data.series.at(8).weights);
  EXPECT_NE(data.series.at(0).weights, data.series.at(8).weights);
}

TEST(GenerateSynthetic, FixedSeedProducesByteIdenticalFiles) {
  const std::string dir = test::scratch_dir("synth");
  const SyntheticScenario scenario = test::three_regime_scenario(8, 0.05);
  const SyntheticData a = generate_synthetic(scenario, 77);
  const SyntheticData b = generate_synthetic(scenario, 77);
  save_series(a.series, dir + "/a.csv");
  save_series(b.series, dir + "/b.csv");
  save_network(*a.network, dir + "/net_a.csv", dir + "/vtx_a.csv");
  save_network(*b.network, dir + "/net_b.csv", dir + "/vtx_b.csv");
  EXPECT_EQ(test::slurp(dir + "/a.csv"), test::slurp(dir + "/b.csv"));
  EXPECT_EQ(test::slurp(dir + "/net_a.csv"), test::slurp(dir + "/net_b.csv"));
  EXPECT_EQ(test::slurp(dir + "/vtx_a.csv"), test::slurp(dir + "/vtx_b.csv"));

  const SyntheticData c = generate_synthetic(scenario, 78);
  EXPECT_NE(a.series.at(0).weights, c.series.at(0).weights);
}

TEST(GenerateSynthetic, RegimeSlowdownAppliesInsideTheBoxOnly) {
  SyntheticScenario scenario;
  scenario.grid_width = 4;
  scenario.grid_height = 4;
  scenario.spacing_m = 500.0;
  scenario.base_speed_mps = 10.0;  // base time 50 s
  scenario.num_snapshots = 2;
  scenario.noise_level = 0.0;
  scenario.regimes = {{1, 2, 0.0, 0.0, 500.0, 500.0, 3.0}};  // the 2x2 corner
  const SyntheticData data = generate_synthetic(scenario, 5);
  const RoadNetwork& net = *data.network;
  for (const Edge& e : net.edges()) {
    const Vertex& a = net.vertex(e.tail);
    const Vertex& b = net.vertex(e.head);
    const bool inside = a.x <= 500 && a.y <= 500 && b.x <= 500 && b.y <= 500;
    EXPECT_EQ(data.series.at(0).weights[e.id], 50.0);
    EXPECT_EQ(data.series.at(1).weights[e.id], inside ? 150.0 : 50.0);
  }
  EXPECT_EQ(data.regime_labels, (std::vector<int>{1, 0}));  // label 1 = "no regime"
}

TEST(GenerateSynthetic, ValidatesScenario) {
  SyntheticScenario bad = test::three_regime_scenario(4, 0.0, 1, 2);
  bad.regimes[0].slowdown = 1.0;
  EXPECT_THROW(generate_synthetic(bad, 1), ValidationError);
  SyntheticScenario out_of_range = test::three_regime_scenario(4, 0.0, 1, 2);
  out_of_range.regimes[2].end = 99;
  EXPECT_THROW(generate_synthetic(out_of_range, 1), ValidationError);
  SyntheticScenario negative_noise = test::three_regime_scenario(4, 0.0, 1, 2);
  negative_noise.noise_level = -0.1;
  EXPECT_THROW(generate_synthetic(negative_noise, 1), ValidationError);
}

}  // namespace
}  // namespace roadsnap

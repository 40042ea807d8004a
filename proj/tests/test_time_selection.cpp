#include "roadsnap/time_selection.hpp"

#include <gtest/gtest.h>

#include "roadsnap/synthetic.hpp"
#include "testutil.hpp"

namespace roadsnap {
namespace {

using test::make_chain_network;

SnapshotSeries series_of_weights(std::shared_ptr<const RoadNetwork> net,
                                 const std::vector<double>& per_snapshot_weight) {
  std::vector<Snapshot> snaps;
  for (std::size_t i = 0; i < per_snapshot_weight.size(); ++i) {
    snaps.push_back({static_cast<std::int64_t>(i) * 300,
                     std::vector<double>(net->num_edges(), per_snapshot_weight[i])});
  }
  return SnapshotSeries(std::move(net), std::move(snaps));
}

TEST(UniformSample, DirectEnumeration) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, std::vector<double>(10, 1.0));
  const TypicalSelection sel = uniform_sample(series, 2, 0);
  EXPECT_EQ(sel.typical_ids, (std::vector<std::size_t>{0, 2, 4, 6, 8}));
  validate_selection(sel, 10);
}

TEST(UniformSample, StepOneSelectsEverythingWithZeroError) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  Rng rng(4);
  std::vector<double> weights;
  for (int i = 0; i < 8; ++i) weights.push_back(rng.uniform(1.0, 10.0));
  const SnapshotSeries series = series_of_weights(net, weights);
  const TypicalSelection sel = uniform_sample(series, 1, 0);
  ASSERT_EQ(sel.typical_ids.size(), series.size());
  QuerySet queries;
  queries.paths.push_back(Path{{0}});
  for (std::size_t i = 0; i < series.size(); ++i) {
    EXPECT_EQ(sel.assignment[i], i);
    EXPECT_EQ(snapshot_error(*net, series.at(sel.assignment[i]), series.at(i), queries), 0.0);
  }
}

TEST(UniformSample, HugeStepSelectsOnlyTheOffset) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, std::vector<double>(10, 1.0));
  const TypicalSelection sel = uniform_sample(series, 100, 0);
  EXPECT_EQ(sel.typical_ids, std::vector<std::size_t>{0});
}

TEST(UniformSample, CountFormulaHoldsForRandomParameters) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const std::size_t step = 1 + rng.below(12);
    const std::size_t offset = std::min(rng.below(step), n - 1);
    const SnapshotSeries series = series_of_weights(net, std::vector<double>(n, 1.0));
    const TypicalSelection sel = uniform_sample(series, step, offset);
    EXPECT_EQ(sel.typical_ids.size(), (n - offset - 1) / step + 1);
    validate_selection(sel, n);
  }
}

TEST(UniformSample, AssignmentTiesGoToEarlierTypical) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, std::vector<double>(4, 1.0));
  const TypicalSelection sel = uniform_sample(series, 2, 0);
  // snapshot 1 sits exactly between typicals 0 and 2
  EXPECT_EQ(sel.assignment[1], 0u);
  EXPECT_EQ(sel.assignment[3], 2u);
}

TEST(UniformSample, RejectsBadArguments) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, std::vector<double>(5, 1.0));
  EXPECT_THROW(uniform_sample(series, 0, 0), std::invalid_argument);
  EXPECT_THROW(uniform_sample(series, 2, 2), std::invalid_argument);
}

TEST(NonuniformSample, IdenticalSnapshotsYieldOneTypical) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, std::vector<double>(6, 3.0));
  QuerySet queries;
  queries.paths.push_back(Path{{0}});
  const TypicalSelection sel = nonuniform_sample(series, 0.001, queries);
  EXPECT_EQ(sel.typical_ids.size(), 1u);
  validate_selection(sel, 6);
}

TEST(NonuniformSample, TwoRegimesSplitAtTheBoundary) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  // regimes: 100,100,100 then 200,200,200; cross error 0.5 or 1.0 > epsilon
  const SnapshotSeries series = series_of_weights(net, {100, 100, 100, 200, 200, 200});
  QuerySet queries;
  queries.paths.push_back(Path{{0}});
  const TypicalSelection sel = nonuniform_sample(series, 0.1, queries);
  ASSERT_EQ(sel.typical_ids.size(), 2u);
  EXPECT_EQ(sel.typical_ids[0], 0u);  // earliest member of an all-equal window
  EXPECT_EQ(sel.typical_ids[1], 3u);
  EXPECT_EQ(sel.assignment, (std::vector<std::size_t>{0, 0, 0, 3, 3, 3}));
}

TEST(NonuniformSample, LargeEpsilonYieldsOneTypical) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, {100, 110, 105, 120});
  QuerySet queries;
  queries.paths.push_back(Path{{0}});
  const TypicalSelection sel = nonuniform_sample(series, 100.0, queries);
  EXPECT_EQ(sel.typical_ids.size(), 1u);
}

TEST(NonuniformSample, WindowGuaranteeHoldsOnNoisyFixture) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(24, 0.02), 7);
  const QuerySet queries = default_query_set(data.series, 40, 8);
  for (const double epsilon : {0.01, 0.05}) {
    const TypicalSelection sel = nonuniform_sample(data.series, epsilon, queries);
    validate_selection(sel, data.series.size());
    // windows are contiguous assignment blocks; check the representative's
    // max error over every multi-member window
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= data.series.size(); ++i) {
      if (i < data.series.size() && sel.assignment[i] == sel.assignment[begin]) continue;
      const std::size_t rep = sel.assignment[begin];
      if (i - begin > 1) {
        for (std::size_t j = begin; j < i; ++j) {
          if (j == rep) continue;
          EXPECT_LE(snapshot_error(data.series.network(), data.series.at(rep),
                                   data.series.at(j), queries),
                    epsilon)
              << "window [" << begin << "," << i << ") rep " << rep << " member " << j;
        }
      }
      begin = i;
    }
  }
}

TEST(NonuniformSample, TypicalCountMonotoneInEpsilon) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(24, 0.02), 11);
  const QuerySet queries = default_query_set(data.series, 40, 12);
  std::size_t previous = data.series.size() + 1;
  for (const double epsilon : {0.005, 0.02, 0.08, 0.3, 1.0}) {
    const std::size_t count =
        nonuniform_sample(data.series, epsilon, queries).typical_ids.size();
    EXPECT_LE(count, previous) << "epsilon " << epsilon;
    previous = count;
  }
}

TEST(NonuniformSample, RejectsBadArguments) {
  auto net = std::make_shared<const RoadNetwork>(make_chain_network({100.0}));
  const SnapshotSeries series = series_of_weights(net, {1.0, 2.0});
  QuerySet queries;
  queries.paths.push_back(Path{{0}});
  EXPECT_THROW(nonuniform_sample(series, 0.0, queries), std::invalid_argument);
  EXPECT_THROW(nonuniform_sample(series, 0.1, QuerySet{}), ValidationError);
}

}  // namespace
}  // namespace roadsnap

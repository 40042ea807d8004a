#include "roadsnap/clustering.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "roadsnap/synthetic.hpp"
#include "testutil.hpp"

namespace roadsnap {
namespace {

std::vector<FeatureVector> two_clouds(std::size_t per_cloud, std::uint64_t seed) {
  // cloud diameter ~1, cloud separation 10x that
  Rng rng(seed);
  std::vector<FeatureVector> vectors;
  for (std::size_t i = 0; i < per_cloud; ++i)
    vectors.push_back({{rng.uniform(0, 1), rng.uniform(0, 1)}, "test"});
  for (std::size_t i = 0; i < per_cloud; ++i)
    vectors.push_back({{10.0 + rng.uniform(0, 1), 10.0 + rng.uniform(0, 1)}, "test"});
  return vectors;
}

// Exhaustive optimal 2-partition under the k-means objective.
std::vector<int> brute_force_two_partition(const std::vector<FeatureVector>& vectors) {
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors[0].dimension();
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels(n, 0);
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << (n - 1)) * 2; ++mask) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = (mask >> i) & 1;
    std::array<std::vector<double>, 2> mean{std::vector<double>(dim, 0.0),
                                            std::vector<double>(dim, 0.0)};
    std::array<int, 2> count{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      ++count[labels[i]];
      for (std::size_t d = 0; d < dim; ++d) mean[labels[i]][d] += vectors[i].values[d];
    }
    if (count[0] == 0 || count[1] == 0) continue;
    for (int c = 0; c < 2; ++c)
      for (std::size_t d = 0; d < dim; ++d) mean[c][d] /= count[c];
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = vectors[i].values[d] - mean[labels[i]][d];
        cost += diff * diff;
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_labels = labels;
    }
  }
  return best_labels;
}

TEST(Kmeans, EachPointItsOwnClusterWhenKEqualsN) {
  const auto vectors = two_clouds(3, 1);
  const ClusteringResult result = kmeans(vectors, static_cast<int>(vectors.size()), 42);
  EXPECT_EQ(result.k, static_cast<int>(vectors.size()));
  std::set<int> labels(result.labels.begin(), result.labels.end());
  EXPECT_EQ(labels.size(), vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    EXPECT_EQ(result.representatives[result.labels[i]], i);
}

TEST(Kmeans, RecoversWellSeparatedCloudsExactly) {
  const auto vectors = two_clouds(5, 2);
  const ClusteringResult result = kmeans(vectors, 2, 7);
  const std::vector<int> oracle = brute_force_two_partition(vectors);
  // same partition up to label names
  EXPECT_NEAR(adjusted_rand_index(result.labels, oracle), 1.0, 1e-12);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(result.labels[i], result.labels[0]);
    EXPECT_EQ(result.labels[5 + i], result.labels[5]);
  }
  EXPECT_NE(result.labels[0], result.labels[5]);
}

TEST(Kmeans, FixedSeedIsDeterministic) {
  const auto vectors = two_clouds(6, 3);
  const ClusteringResult a = kmeans(vectors, 3, 11);
  const ClusteringResult b = kmeans(vectors, 3, 11);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.representatives, b.representatives);
}

TEST(Kmeans, ObjectiveIsNonIncreasing) {
  Rng rng(5);
  std::vector<FeatureVector> vectors;
  for (int i = 0; i < 40; ++i)
    vectors.push_back({{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)}, "t"});
  const ClusteringResult result = kmeans(vectors, 5, 13);
  ASSERT_GE(result.iteration_objective.size(), 2u);
  for (std::size_t i = 1; i < result.iteration_objective.size(); ++i)
    EXPECT_LE(result.iteration_objective[i], result.iteration_objective[i - 1] + 1e-9);
}

TEST(Kmeans, ClustersAreNonEmptyEvenWithDuplicatePoints) {
  std::vector<FeatureVector> vectors(6, FeatureVector{{1.0, 1.0}, "t"});
  vectors.push_back({{5.0, 5.0}, "t"});
  const ClusteringResult result = kmeans(vectors, 3, 17);
  std::vector<int> sizes(3, 0);
  for (int label : result.labels) ++sizes[label];
  for (int c = 0; c < 3; ++c) EXPECT_GT(sizes[c], 0);
}

TEST(Kmeans, RejectsBadArguments) {
  const auto vectors = two_clouds(2, 4);
  EXPECT_THROW(kmeans(vectors, 0, 1), std::invalid_argument);
  EXPECT_THROW(kmeans(vectors, 5, 1), std::invalid_argument);
  EXPECT_THROW(kmeans({}, 1, 1), std::invalid_argument);
}

TEST(KmeansAdaptive, RadiusBoundsDriveK) {
  const auto vectors = two_clouds(4, 6);
  EXPECT_EQ(kmeans_adaptive(vectors, 1e6, 3).k, 1);
  EXPECT_EQ(kmeans_adaptive(vectors, 3.0, 3).k, 2);  // between intra and inter scale
  const ClusteringResult distinct = kmeans_adaptive(vectors, 0.0, 3);
  EXPECT_EQ(distinct.k, static_cast<int>(vectors.size()));
}

TEST(KmeansAdaptive, EveryPointWithinRadiusOfItsMedoid) {
  Rng rng(8);
  std::vector<FeatureVector> vectors;
  for (int i = 0; i < 30; ++i) vectors.push_back({{rng.uniform(0, 5), rng.uniform(0, 5)}, "t"});
  const double radius = 1.5;
  const ClusteringResult result = kmeans_adaptive(vectors, radius, 21);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const FeatureVector& medoid = vectors[result.representatives[result.labels[i]]];
    EXPECT_LE(euclidean_distance(vectors[i], medoid), radius + 1e-12);
  }
}

DistanceMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
  return DistanceMatrix(rows);
}

TEST(Hierarchical, ThresholdExtremes) {
  const DistanceMatrix distances = matrix_from({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}});
  EXPECT_EQ(hierarchical(distances, 1.0).k, 3);  // tau below every distance
  EXPECT_EQ(hierarchical(distances, 4.0).k, 1);  // tau at the maximum
}

TEST(Hierarchical, HandSimulatedThreePoints) {
  const DistanceMatrix distances = matrix_from({{0, 1, 10}, {1, 0, 10}, {10, 10, 0}});
  const ClusteringResult result = hierarchical(distances, 5.0);
  EXPECT_EQ(result.k, 2);
  EXPECT_EQ(result.labels[0], result.labels[1]);
  EXPECT_NE(result.labels[0], result.labels[2]);
}

TEST(Hierarchical, CompleteLinkageBoundsClusterDiameter) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 12;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        rows[i][j] = rows[j][i] = rng.uniform(0.0, 10.0);
      }
    }
    const double tau = rng.uniform(1.0, 9.0);
    const DistanceMatrix distances = matrix_from(rows);
    const ClusteringResult result = hierarchical(distances, tau);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (result.labels[i] == result.labels[j])
          EXPECT_LE(distances.at(i, j), tau) << "trial " << trial;
      }
    }
  }
}

TEST(Hierarchical, RejectsInvalidMatrices) {
  EXPECT_THROW(matrix_from({{0, 1}, {2, 0}}), ValidationError);     // asymmetric
  EXPECT_THROW(matrix_from({{1, 1}, {1, 0}}), ValidationError);     // nonzero diagonal
  EXPECT_THROW(matrix_from({{0, -1}, {-1, 0}}), ValidationError);   // negative
  EXPECT_THROW(matrix_from({{0, 1}, {1, 0}, {1, 1}}), ValidationError);  // not square
}

TEST(Hierarchical, CutAtExactClusterCount) {
  const DistanceMatrix distances =
      matrix_from({{0, 1, 8, 9}, {1, 0, 7, 9}, {8, 7, 0, 2}, {9, 9, 2, 0}});
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(hierarchical_k(distances, k).k, k);
  EXPECT_THROW(hierarchical_k(distances, 0), std::invalid_argument);
  EXPECT_THROW(hierarchical_k(distances, 5), std::invalid_argument);
  const ClusteringResult two = hierarchical_k(distances, 2);
  EXPECT_EQ(two.labels[0], two.labels[1]);
  EXPECT_EQ(two.labels[2], two.labels[3]);
}

TEST(Hierarchical, ScalingDistancesAndTauTogetherIsInvariant) {
  Rng rng(37);
  const std::size_t n = 9;
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) rows[i][j] = rows[j][i] = rng.uniform(0.5, 6.0);
  const double tau = 2.5;
  const ClusteringResult base = hierarchical(matrix_from(rows), tau);
  const double c = 3.75;
  for (auto& row : rows)
    for (double& v : row) v *= c;
  const ClusteringResult scaled = hierarchical(matrix_from(rows), tau * c);
  EXPECT_EQ(base.labels, scaled.labels);
  EXPECT_EQ(base.representatives, scaled.representatives);
}

TEST(Medoid, InvariantUnderClusterRelabeling) {
  const auto vectors = two_clouds(4, 9);
  const ClusteringResult result = kmeans(vectors, 2, 5);
  // medoid of each cluster must be a member minimizing summed distance
  for (int c = 0; c < result.k; ++c) {
    const std::size_t rep = result.representatives[c];
    EXPECT_EQ(result.labels[rep], c);
    auto summed = [&](std::size_t candidate) {
      double total = 0.0;
      for (std::size_t i = 0; i < vectors.size(); ++i)
        if (result.labels[i] == c) total += euclidean_distance(vectors[candidate], vectors[i]);
      return total;
    };
    for (std::size_t i = 0; i < vectors.size(); ++i)
      if (result.labels[i] == c) EXPECT_GE(summed(i) + 1e-12, summed(rep));
  }
}

TEST(TypicalFromClusters, MapsRepresentativesAndAssignments) {
  auto net = test::shared_grid(3, 3);
  std::vector<Snapshot> snaps;
  for (int i = 0; i < 4; ++i) snaps.push_back(test::uniform_snapshot(*net, 1.0 + i, i * 300));
  const SnapshotSeries series(net, std::move(snaps));

  ClusteringResult result;
  result.labels = {0, 0, 1, 1};
  result.k = 2;
  result.representatives = {1, 2};
  result.method_tag = "test";
  const TypicalSelection sel = typical_from_clusters(series, result);
  EXPECT_EQ(sel.typical_ids, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(sel.assignment, (std::vector<std::size_t>{1, 1, 2, 2}));

  ClusteringResult single;
  single.labels = {0, 0, 0, 0};
  single.k = 1;
  single.representatives = {3};
  const TypicalSelection all_one = typical_from_clusters(series, single);
  EXPECT_EQ(all_one.typical_ids, std::vector<std::size_t>{3});
}

TEST(TypicalFromClusters, PlantedRegimesRecoverOnePerCluster) {
  const SyntheticData data = generate_synthetic(test::three_regime_scenario(12, 0.0, 4, 8), 3);
  std::vector<FeatureVector> vectors;
  for (const Snapshot& s : data.series.snapshots()) vectors.push_back(weight_vector(s));
  const ClusteringResult clusters = kmeans(vectors, 3, 19);
  EXPECT_NEAR(adjusted_rand_index(clusters.labels, data.regime_labels), 1.0, 1e-12);
  const TypicalSelection sel = typical_from_clusters(data.series, clusters);
  EXPECT_EQ(sel.typical_ids.size(), 3u);
  for (std::size_t i = 0; i < data.regime_labels.size(); ++i)
    EXPECT_EQ(data.regime_labels[sel.assignment[i]], data.regime_labels[i]);
}

TEST(AdjustedRandIndex, KnownValues) {
  const std::vector<int> a{0, 0, 1, 1};
  EXPECT_EQ(adjusted_rand_index(a, a), 1.0);
  const std::vector<int> renamed{5, 5, 2, 2};
  EXPECT_EQ(adjusted_rand_index(a, renamed), 1.0);
  const std::vector<int> half{0, 0, 0, 1};
  EXPECT_EQ(adjusted_rand_index(a, half), 0.0);  // hand-computed contingency
  const std::vector<int> ones{1, 1, 1, 1};
  EXPECT_EQ(adjusted_rand_index(ones, ones), 1.0);
}

}  // namespace
}  // namespace roadsnap

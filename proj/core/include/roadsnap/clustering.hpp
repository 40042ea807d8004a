#ifndef ROADSNAP_CLUSTERING_HPP
#define ROADSNAP_CLUSTERING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roadsnap/edge_repr.hpp"
#include "roadsnap/time_selection.hpp"

namespace roadsnap {

/// Symmetric pairwise distances with zero diagonal; validated on
/// construction.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::vector<std::vector<double>> values);

  std::size_t size() const { return values_.size(); }
  double at(std::size_t i, std::size_t j) const { return values_[i][j]; }

 private:
  std::vector<std::vector<double>> values_;
};

/// Cluster labels (0..k-1, every cluster nonempty) plus the medoid
/// representative of each cluster. Labels are canonicalized so cluster ids
/// ascend with their smallest member index.
struct ClusteringResult {
  std::vector<int> labels;
  int k = 0;
  std::vector<std::size_t> representatives;  // per cluster, a member index
  std::string method_tag;
  std::vector<double> iteration_objective;  // kmeans: sum of squared
                                            // point-to-centroid distances per
                                            // Lloyd iteration
};

/// Lloyd's algorithm with farthest-point seeding (first center drawn from
/// the seed, the rest maximize the min distance to chosen centers). Empty
/// clusters are repaired by moving in the point farthest from its centroid.
/// Representatives are medoids under Euclidean distance. Rejects k > n.
ClusteringResult kmeans(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed);

/// Smallest k (searched incrementally from 1) whose kmeans clustering puts
/// every point within radius_max of its cluster medoid.
ClusteringResult kmeans_adaptive(const std::vector<FeatureVector>& vectors, double radius_max,
                                 std::uint64_t seed);

/// Complete-linkage agglomeration until the cheapest merge would exceed tau;
/// every resulting cluster's diameter is <= tau. Merge ties prefer the
/// lexicographically smallest cluster pair. Representatives are medoids
/// under the supplied distances.
ClusteringResult hierarchical(const DistanceMatrix& distances, double tau);

/// Complete-linkage agglomeration cut at exactly k clusters (used by the
/// experiment sweep, which is parameterized by cluster count rather than a
/// distance threshold).
ClusteringResult hierarchical_k(const DistanceMatrix& distances, int k);

/// Medoid representatives become the typical snapshots; labels become the
/// assignment.
TypicalSelection typical_from_clusters(const SnapshotSeries& series,
                                       const ClusteringResult& result);

/// Adjusted Rand Index between two labelings of the same items; 1 for
/// identical partitions, ~0 for independent ones.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace roadsnap

#endif  // ROADSNAP_CLUSTERING_HPP

#ifndef ROADSNAP_EDGE_REPR_HPP
#define ROADSNAP_EDGE_REPR_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "roadsnap/network.hpp"
#include "roadsnap/pathfinding.hpp"

namespace roadsnap {

/// A snapshot rendered as a real vector. All snapshots of one experiment
/// share a method tag and dimension.
struct FeatureVector {
  std::vector<double> values;
  std::string method_tag;

  std::size_t dimension() const { return values.size(); }
};

double euclidean_distance(const FeatureVector& a, const FeatureVector& b);

/// The snapshot's weights in edge-id order.
FeatureVector weight_vector(const Snapshot& snapshot);

/// Element-wise difference against a reference snapshot (the series' first,
/// unless callers choose otherwise).
FeatureVector delta_weight_vector(const Snapshot& snapshot, const Snapshot& reference);

/// Coordinate subset induced by a cv threshold; the same subset applies to
/// every snapshot of the experiment. kept is in edge-id order.
struct CvMask {
  std::vector<EdgeId> kept;
  double threshold = 0.0;
};

/// Keeps the edges whose cv is at least `thresh_cv`. Throws ValidationError
/// when nothing survives (the message suggests lowering the threshold).
CvMask make_cv_mask(const EdgeStats& stats, double thresh_cv);

FeatureVector apply_cv_mask(const FeatureVector& vec, const CvMask& mask);

std::vector<FeatureVector> cv_filter(const std::vector<FeatureVector>& vectors,
                                     const EdgeStats& stats, double thresh_cv);

/// Centered PCA basis: project(x) = components * (x - mean). Components are
/// rows in descending eigenvalue order, each sign-fixed so its
/// largest-magnitude coordinate is positive.
struct PcaModel {
  std::vector<double> mean;        // input_dim
  std::vector<double> components;  // output_dim x input_dim, row-major
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
};

PcaModel fit_pca(const std::vector<FeatureVector>& vectors, std::size_t d);
FeatureVector pca_project(const PcaModel& model, const FeatureVector& vec);

/// Fits on the given vectors and projects them. d must lie in
/// [1, min(n, dimension)].
std::vector<FeatureVector> pca_reduce(const std::vector<FeatureVector>& vectors, std::size_t d);

/// 4x4 grid over the vertex bounding box. Quotas distribute `pnum` paths
/// proportionally to per-cell vertex counts with largest-remainder rounding,
/// so they always sum to pnum; empty cells get zero.
struct RegionPartition {
  static constexpr int kGrid = 4;
  static constexpr int kCells = kGrid * kGrid;

  std::vector<int> cell_of;               // per vertex
  std::array<std::size_t, kCells> vertex_count{};
  std::array<std::size_t, kCells> quota{};
  RoadNetwork::BoundingBox box;
};

RegionPartition partition_regions(const RoadNetwork& network, std::size_t pnum);

struct PathSelectionParams {
  std::size_t pnum = 100;
  double l_min_m = 2000.0;
  double l_max_m = 3000.0;
  double jaccard_max = 0.3;
  double thresh_cv = 0.0;      // edge-constrained selection
  double thresh_cv_low = 0.0;  // edge-greedy growth gate
  std::size_t attempts_per_path = 1000;
};

/// Typical paths with their home region (region of the first edge's tail).
/// Invariants: static length within [l_min, l_max], no repeated edges,
/// pairwise Jaccard within a region <= jaccard_max. Regions whose quota
/// could not be filled within the attempt budget are reported in warnings.
struct TypicalPathSet {
  std::vector<Path> paths;
  std::vector<int> region_of;
  PathSelectionParams params;
  std::vector<std::string> warnings;
};

/// Jaccard coefficient of the two paths' edge sets.
double path_jaccard(const Path& a, const Path& b);

/// Greedy scan in candidate order; a candidate is kept iff its Jaccard
/// against every kept path stays <= jaccard_max.
std::vector<Path> dedup_paths(const std::vector<Path>& candidates, double jaccard_max);

/// Random growth: random start edge in the region, uniformly random
/// unvisited out-edges, grow until static length reaches a random target in
/// [l_min, l_max]; overlong or dead-ended-short walks are discarded.
TypicalPathSet select_paths_random(const RoadNetwork& network, const RegionPartition& partition,
                                   const PathSelectionParams& params, std::uint64_t seed);

/// Random growth restricted to the subgraph of edges with cv >= thresh_cv.
/// With thresh_cv == 0 this is exactly select_paths_random under the same
/// seed. Throws ValidationError if the subgraph is empty.
TypicalPathSet select_paths_constrained(const RoadNetwork& network,
                                        const RegionPartition& partition, const EdgeStats& stats,
                                        const PathSelectionParams& params, std::uint64_t seed);

/// Random start on the full graph; growth always takes the unvisited
/// out-edge of largest cv among those with cv >= thresh_cv_low, ties to the
/// smaller edge id.
TypicalPathSet select_paths_greedy(const RoadNetwork& network, const RegionPartition& partition,
                                   const EdgeStats& stats, const PathSelectionParams& params,
                                   std::uint64_t seed);

/// Checks the three declared path-set invariants mechanically.
void validate_path_set(const RoadNetwork& network, const TypicalPathSet& set);

/// [travel time of each typical path] under the snapshot.
FeatureVector aggregated_vector(const RoadNetwork& network, const Snapshot& snapshot,
                                const TypicalPathSet& typical_paths);

}  // namespace roadsnap

#endif  // ROADSNAP_EDGE_REPR_HPP

#ifndef ROADSNAP_MATCHING_HPP
#define ROADSNAP_MATCHING_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roadsnap/contraction.hpp"
#include "roadsnap/edge_repr.hpp"
#include "roadsnap/network.hpp"
#include "roadsnap/time_selection.hpp"
#include "roadsnap/vertex_repr.hpp"

namespace roadsnap {

enum class ReprMethod { kEdge, kEdgeDelta, kAggEdge, kVertexBc, kVertexSet };

ReprMethod repr_method_from_tag(const std::string& tag);

/// Everything needed to convert an arbitrary snapshot into the catalog's
/// representation space: mask/basis/reference for the edge family, typical
/// paths for the aggregated family, typical vertices plus the training
/// maximum reachable-set sizes for the vertex family.
struct ReprSpec {
  ReprMethod base = ReprMethod::kEdge;
  bool use_cv = false;
  bool use_pca = false;
  CvMask cv_mask;
  PcaModel pca;
  std::vector<double> delta_reference;  // edge-delta reference weights
  TypicalPathSet typical_paths;
  TypicalVertexSet typical_vertices;
  double t0_s = 120.0;
  std::vector<std::size_t> max_reach;  // per typical vertex, over training

  std::string tag() const;
};

/// A converted snapshot; exactly one of the two members is meaningful.
struct Representation {
  FeatureVector vec;
  VertexSetRepresentation sets;
  bool is_set = false;
};

/// Converts a snapshot through the spec. Vertex conversions run one bounded
/// expansion per typical vertex on the probe snapshot; the vertex-bc block
/// coefficient uses the training maxima stored in the spec.
Representation convert_snapshot(const ReprSpec& spec, const RoadNetwork& network,
                                const Snapshot& snapshot);

/// Spec factories fitting the conversion artifacts on a training series.
ReprSpec make_edge_spec(const SnapshotSeries& series, bool delta, bool use_cv, double thresh_cv,
                        bool use_pca, std::size_t pca_dim);
ReprSpec make_agg_edge_spec(TypicalPathSet typical_paths);
ReprSpec make_vertex_spec(const ReachabilityTable& table, TypicalVertexSet typical_vertices,
                          bool set_representation);

/// Euclidean for vector representations, mean Jaccard distance for set ones.
double representation_distance(const Representation& a, const Representation& b);

/// k typical snapshots, each carrying its representation and shortest-path
/// index. theta is the new-typical threshold: probes farther than theta from
/// every entry are declared new typical snapshots.
class TypicalSnapshotCatalog {
 public:
  struct Entry {
    std::size_t snapshot_id = 0;
    Snapshot snapshot;
    Representation repr;
    std::shared_ptr<const ShortestPathIndex> index;
  };

  TypicalSnapshotCatalog(std::shared_ptr<const RoadNetwork> network, ReprSpec spec, double theta);

  const RoadNetwork& network() const { return *network_; }
  std::shared_ptr<const RoadNetwork> network_ptr() const { return network_; }
  const ReprSpec& spec() const { return spec_; }
  double theta() const { return theta_; }
  void set_theta(double theta) { theta_ = theta; }

  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_.at(i); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Appends an entry (converted + indexed). Writers require exclusive
  /// access; readers see the catalog before or after, never mid-append.
  void add_entry(std::size_t snapshot_id, const Snapshot& snapshot);

 private:
  std::shared_ptr<const RoadNetwork> network_;
  ReprSpec spec_;
  double theta_ = 0.0;
  std::vector<Entry> entries_;
};

/// Builds a catalog from a selection over a training series. When theta is
/// not given it defaults to the maximum distance between any training
/// snapshot's representation and its assigned typical's representation, so
/// anything as close as the training members will match.
TypicalSnapshotCatalog build_catalog(const SnapshotSeries& series,
                                     const TypicalSelection& selection, ReprSpec spec,
                                     std::optional<double> theta = std::nullopt);

struct MatchOutcome {
  std::optional<std::size_t> matched_id;  // absent: new typical snapshot
  double distance = 0.0;                  // to the nearest entry
  double t_repr_s = 0.0;                  // conversion time
  double t_similarity_total_s = 0.0;      // all k comparisons
  std::size_t k = 0;                      // entries compared

  bool new_typical() const { return !matched_id.has_value(); }
};

/// Converts the probe, scans all entries, returns the nearest entry when its
/// distance is within theta (ties to the smaller snapshot id).
MatchOutcome match(const Snapshot& probe, const TypicalSnapshotCatalog& catalog);

/// Admits a probe that failed to match: adds (snapshot, representation,
/// fresh index) under the next free snapshot id. Returns the new entry's id.
std::size_t admit_new_typical(const Snapshot& probe, TypicalSnapshotCatalog& catalog);

struct QueryAnswer {
  bool reachable = false;
  double distance_s = 0.0;  // on the matched typical snapshot
  Path path;
  std::size_t matched_id = 0;
  double probe_travel_time_s = 0.0;  // same path priced on the probe
  double relative_error = 0.0;       // |matched - probe| / probe, 0 for empty paths
};

/// Matches once per traffic condition and reuses the outcome for every
/// query until the probe changes; conversions() exposes how many times the
/// probe was actually converted so callers can assert the caching.
class Matcher {
 public:
  explicit Matcher(const TypicalSnapshotCatalog& catalog) : catalog_(&catalog) {}

  const MatchOutcome& match_probe(const Snapshot& probe);
  QueryAnswer answer_query(const Snapshot& probe, VertexId source, VertexId target);

  std::size_t conversions() const { return conversions_; }

 private:
  const TypicalSnapshotCatalog* catalog_;
  const Snapshot* cached_probe = nullptr;
  std::int64_t cached_timestamp_ = 0;
  std::size_t cached_catalog_size_ = 0;
  MatchOutcome cached_outcome_;
  std::size_t conversions_ = 0;
};

/// Directory layout: catalog.json (method, theta, entry metadata, artifact
/// references) plus network/vertices/snapshots CSVs and per-method artifact
/// files. Indexes are rebuilt on load.
void save_catalog(const TypicalSnapshotCatalog& catalog, const std::string& dir);
TypicalSnapshotCatalog load_catalog(const std::string& dir);

}  // namespace roadsnap

#endif  // ROADSNAP_MATCHING_HPP

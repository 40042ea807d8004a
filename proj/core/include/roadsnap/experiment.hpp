#ifndef ROADSNAP_EXPERIMENT_HPP
#define ROADSNAP_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "roadsnap/matching.hpp"
#include "roadsnap/network.hpp"

namespace roadsnap {

enum class PathStrategy { kRandom, kConstrained, kGreedy };

PathStrategy path_strategy_from_tag(const std::string& tag);

/// Representation-fitting knobs shared by every representation method in a
/// run. cv thresholds are given as percentiles of the edge cv distribution;
/// pca_dim == 0 selects min(n - 1, 50).
struct ReprConfig {
  double t0_s = 120.0;
  std::size_t typical_vertex_count = 50;
  std::size_t pca_dim = 0;
  double cv_pct = 90.0;
  double cv_low_pct = 70.0;
  PathStrategy path_strategy = PathStrategy::kConstrained;
  PathSelectionParams path_params;
};

/// One line of the methods list: a time-based selector or a representation
/// plus clustering method ("<repr>+<kmeans|hier>").
struct MethodSpec {
  enum class Kind { kTimeUniform, kTimeNonuniform, kReprCluster };
  Kind kind = Kind::kTimeUniform;
  std::string repr_tag;  // kReprCluster only
  std::string cluster;   // "kmeans" or "hier"

  std::string method_label() const;
  std::string repr_label() const;
};

MethodSpec parse_method_spec(const std::string& token);

struct ExperimentConfig {
  std::string network_path, vertices_path, series_path;
  std::string queries_source = "generated";  // "generated" | "file"
  std::string queries_path;
  std::size_t query_count = 200;
  ReprConfig repr;
  std::vector<MethodSpec> methods;
  std::vector<std::size_t> sweep_k;
  std::uint64_t seed = 0;
  bool measure_timings = true;
  std::string output_path = "results.csv";
};

/// Flat key-value file with [section] headers and '#' comments; unknown keys
/// are rejected. Referenced files are checked for existence.
ExperimentConfig load_experiment_config(const std::string& path);
void validate_experiment_config(const ExperimentConfig& config, std::size_t series_n);

struct ResultRow {
  std::string method;
  std::string repr;
  std::size_t requested_k = 0;
  std::size_t k = 0;  // actual typical count
  double mean_error = 0.0;
  double max_error = 0.0;
  double select_time_s = 0.0;
  double match_time_s = 0.0;
  bool shortfall = false;  // actual k differs from requested
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::string metadata_json;
};

/// For each (method, k) in the sweep: select typicals, assign every
/// snapshot, average the snapshot error of each assignment over the query
/// set, and record timings (zeros when measure_timings is off, which makes
/// two identically-seeded runs byte-identical).
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Header: method,repr,k,mean_error,max_error,select_time_s,match_time_s
std::string results_csv(const ExperimentResult& result);

/// Writes the results CSV and a <path>.meta.json sidecar (query-set size,
/// seed, requested-vs-actual k per row, warnings).
void write_results(const ExperimentResult& result, const std::string& csv_path);

struct TimingRow {
  std::string family;               // the catalog's representation tag
  double graph_convert_s = 0.0;     // mean conversion time per probe
  double similarity_per_entry_s = 0.0;
};

/// Mean conversion and per-entry similarity times per catalog, averaged over
/// the probes and `repetitions` runs each.
std::vector<TimingRow> timing_report(const std::vector<const TypicalSnapshotCatalog*>& catalogs,
                                     const std::vector<const Snapshot*>& probes,
                                     int repetitions = 20);

/// Mean wall time of one full similarity scan (probe representation against
/// all k entries); the probe is converted once outside the timed region.
double mean_similarity_scan_s(const TypicalSnapshotCatalog& catalog, const Snapshot& probe,
                              int repetitions);

}  // namespace roadsnap

#endif  // ROADSNAP_EXPERIMENT_HPP

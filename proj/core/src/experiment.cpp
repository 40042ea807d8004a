#include "roadsnap/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "roadsnap/clustering.hpp"
#include "roadsnap/csv.hpp"
#include "roadsnap/io.hpp"
#include "roadsnap/numeric.hpp"
#include "roadsnap/rng.hpp"
#include "roadsnap/time_selection.hpp"

namespace roadsnap {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t pos = value.find(',', start);
    if (pos == std::string::npos) pos = value.size();
    const std::string item = trim(value.substr(start, pos - start));
    if (!item.empty()) out.push_back(item);
    start = pos + 1;
    if (pos == value.size()) break;
  }
  return out;
}

struct EdgeReprFlags {
  bool delta = false;
  bool cv = false;
  bool pca = false;
};

// edge[-delta][-cv][-pca], in that order.
std::optional<EdgeReprFlags> parse_edge_tag(const std::string& tag) {
  if (tag.rfind("edge", 0) != 0) return std::nullopt;
  EdgeReprFlags flags;
  std::string rest = tag.substr(4);
  auto eat = [&rest](const char* token) {
    if (rest.rfind(token, 0) == 0) {
      rest = rest.substr(std::string(token).size());
      return true;
    }
    return false;
  };
  flags.delta = eat("-delta");
  flags.cv = eat("-cv");
  flags.pca = eat("-pca");
  if (!rest.empty()) return std::nullopt;
  return flags;
}

}  // namespace

PathStrategy path_strategy_from_tag(const std::string& tag) {
  if (tag == "random") return PathStrategy::kRandom;
  if (tag == "constrained") return PathStrategy::kConstrained;
  if (tag == "greedy") return PathStrategy::kGreedy;
  throw ConfigError("unknown path strategy: " + tag);
}

std::string MethodSpec::method_label() const {
  switch (kind) {
    case Kind::kTimeUniform:
      return "time-uniform";
    case Kind::kTimeNonuniform:
      return "time-nonuniform";
    case Kind::kReprCluster:
      return cluster;
  }
  return "?";
}

std::string MethodSpec::repr_label() const {
  return kind == Kind::kReprCluster ? repr_tag : "time";
}

MethodSpec parse_method_spec(const std::string& token) {
  MethodSpec spec;
  if (token == "time-uniform") {
    spec.kind = MethodSpec::Kind::kTimeUniform;
    return spec;
  }
  if (token == "time-nonuniform") {
    spec.kind = MethodSpec::Kind::kTimeNonuniform;
    return spec;
  }
  const auto plus = token.find('+');
  if (plus == std::string::npos)
    throw ConfigError("method '" + token + "' is not time-based and lacks '+<clustering>'");
  spec.kind = MethodSpec::Kind::kReprCluster;
  spec.repr_tag = token.substr(0, plus);
  spec.cluster = token.substr(plus + 1);
  if (spec.cluster != "kmeans" && spec.cluster != "hier")
    throw ConfigError("unknown clustering method: " + spec.cluster);
  const bool known_tag = parse_edge_tag(spec.repr_tag).has_value() ||
                         spec.repr_tag == "agg-edge" || spec.repr_tag == "vertex-bc" ||
                         spec.repr_tag == "vertex-set";
  if (!known_tag) throw ConfigError("unknown representation: " + spec.repr_tag);
  if (spec.repr_tag == "vertex-set" && spec.cluster != "hier")
    throw ValidationError("vertex-set representations cluster hierarchically only");
  return spec;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  ExperimentConfig config;
  const auto lines = read_lines(path);
  std::string section;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qualified = section + "." + key;

    if (qualified == "dataset.network") config.network_path = value;
    else if (qualified == "dataset.vertices") config.vertices_path = value;
    else if (qualified == "dataset.series") config.series_path = value;
    else if (qualified == "queries.source") config.queries_source = value;
    else if (qualified == "queries.path") config.queries_path = value;
    else if (qualified == "queries.count") config.query_count = parse_u32(value, path, i + 1);
    else if (qualified == "repr.t0_s") config.repr.t0_s = parse_double(value, path, i + 1);
    else if (qualified == "repr.typical_vertices")
      config.repr.typical_vertex_count = parse_u32(value, path, i + 1);
    else if (qualified == "repr.pca_dim") config.repr.pca_dim = parse_u32(value, path, i + 1);
    else if (qualified == "repr.cv_percentile")
      config.repr.cv_pct = parse_double(value, path, i + 1);
    else if (qualified == "repr.cv_low_percentile")
      config.repr.cv_low_pct = parse_double(value, path, i + 1);
    else if (qualified == "repr.pnum")
      config.repr.path_params.pnum = parse_u32(value, path, i + 1);
    else if (qualified == "repr.l_min_m")
      config.repr.path_params.l_min_m = parse_double(value, path, i + 1);
    else if (qualified == "repr.l_max_m")
      config.repr.path_params.l_max_m = parse_double(value, path, i + 1);
    else if (qualified == "repr.jaccard_max")
      config.repr.path_params.jaccard_max = parse_double(value, path, i + 1);
    else if (qualified == "repr.attempts_per_path")
      config.repr.path_params.attempts_per_path = parse_u32(value, path, i + 1);
    else if (qualified == "repr.path_strategy")
      config.repr.path_strategy = path_strategy_from_tag(value);
    else if (qualified == "run.methods") {
      for (const std::string& token : split_list(value))
        config.methods.push_back(parse_method_spec(token));
    } else if (qualified == "run.sweep_k") {
      for (const std::string& token : split_list(value))
        config.sweep_k.push_back(parse_u32(token, path, i + 1));
    } else if (qualified == "run.seed") config.seed = std::stoull(value);
    else if (qualified == "run.measure_timings") {
      if (value != "true" && value != "false")
        throw ParseError(path + ":" + std::to_string(i + 1) + ": expected true or false");
      config.measure_timings = value == "true";
    } else if (qualified == "run.output") config.output_path = value;
    else
      throw ParseError(path + ":" + std::to_string(i + 1) + ": unknown key '" + qualified + "'");
  }
  return config;
}

void validate_experiment_config(const ExperimentConfig& config, std::size_t series_n) {
  if (config.methods.empty()) throw ConfigError("config: no methods given");
  if (config.sweep_k.empty()) throw ConfigError("config: empty sweep_k");
  for (std::size_t k : config.sweep_k) {
    if (k < 1 || k >= series_n) {
      std::ostringstream msg;
      msg << "config: sweep value " << k << " outside [1, n) with n=" << series_n;
      throw ConfigError(msg.str());
    }
  }
  if (config.queries_source != "generated" && config.queries_source != "file")
    throw ConfigError("config: queries.source must be 'generated' or 'file'");
  if (config.queries_source == "file" && !std::filesystem::exists(config.queries_path))
    throw ConfigError("config: query file does not exist: " + config.queries_path);
}

namespace {

// Fitted representation artifacts for one repr tag, shared across the sweep.
struct Prepared {
  ReprSpec spec;
  std::vector<Representation> reprs;  // one per snapshot
  std::vector<FeatureVector> vectors;  // vector reprs only
  double prep_time_s = 0.0;
  std::vector<std::string> warnings;
  bool is_set = false;
  std::optional<DistanceMatrix> distances;  // built on demand for hier
};

struct VertexArtifacts {
  ReachabilityTable table;
  std::vector<double> fluctuation;
  TypicalVertexSet typical;
};

class ReprWorkbench {
 public:
  ReprWorkbench(const SnapshotSeries& series, const ReprConfig& config, std::uint64_t seed)
      : series_(series), config_(config), seed_(seed) {}

  Prepared& get(const std::string& tag) {
    auto it = cache_.find(tag);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(tag, prepare(tag)).first->second;
  }

 private:
  const EdgeStats& stats() {
    if (!stats_) stats_ = edge_stats(series_);
    return *stats_;
  }

  const VertexArtifacts& vertex_artifacts() {
    if (!vertex_) {
      VertexArtifacts art{build_reachability(series_, config_.t0_s), {}, {}};
      art.fluctuation = traffic_fluctuation(block_coefficients(art.table));
      art.typical =
          select_typical_vertices(art.table, art.fluctuation, config_.typical_vertex_count);
      vertex_ = std::move(art);
    }
    return *vertex_;
  }

  Prepared prepare(const std::string& tag) {
    Prepared prep;
    const auto t_start = Clock::now();

    if (const auto edge_flags = parse_edge_tag(tag)) {
      double thresh = 0.0;
      if (edge_flags->cv) thresh = cv_percentile(stats(), config_.cv_pct);
      std::size_t d = config_.pca_dim;
      if (edge_flags->pca && d == 0)
        d = std::max<std::size_t>(1, std::min(series_.size() - 1, std::size_t{50}));
      prep.spec = make_edge_spec(series_, edge_flags->delta, edge_flags->cv, thresh,
                                 edge_flags->pca, d);
    } else if (tag == "agg-edge") {
      const RegionPartition partition =
          partition_regions(series_.network(), config_.path_params.pnum);
      PathSelectionParams params = config_.path_params;
      params.thresh_cv = cv_percentile(stats(), config_.cv_pct);
      params.thresh_cv_low = cv_percentile(stats(), config_.cv_low_pct);
      const std::uint64_t path_seed = Rng::derive(seed_, 0x9a7a);
      TypicalPathSet paths;
      switch (config_.path_strategy) {
        case PathStrategy::kRandom:
          paths = select_paths_random(series_.network(), partition, params, path_seed);
          break;
        case PathStrategy::kConstrained:
          paths = select_paths_constrained(series_.network(), partition, stats(), params,
                                           path_seed);
          break;
        case PathStrategy::kGreedy:
          paths = select_paths_greedy(series_.network(), partition, stats(), params, path_seed);
          break;
      }
      prep.warnings = paths.warnings;
      prep.spec = make_agg_edge_spec(std::move(paths));
    } else if (tag == "vertex-bc" || tag == "vertex-set") {
      const VertexArtifacts& art = vertex_artifacts();
      if (art.typical.truncated)
        prep.warnings.push_back("typical vertex selection truncated by coverage disjointness");
      prep.spec = make_vertex_spec(art.table, art.typical, tag == "vertex-set");
    } else {
      throw ConfigError("unknown representation: " + tag);
    }

    prep.reprs.reserve(series_.size());
    for (const Snapshot& snap : series_.snapshots())
      prep.reprs.push_back(convert_snapshot(prep.spec, series_.network(), snap));
    prep.is_set = !prep.reprs.empty() && prep.reprs[0].is_set;
    if (!prep.is_set) {
      prep.vectors.reserve(prep.reprs.size());
      for (const Representation& r : prep.reprs) prep.vectors.push_back(r.vec);
    }
    prep.prep_time_s = seconds_since(t_start);
    return prep;
  }

  const SnapshotSeries& series_;
  const ReprConfig& config_;
  std::uint64_t seed_;
  std::optional<EdgeStats> stats_;
  std::optional<VertexArtifacts> vertex_;
  std::map<std::string, Prepared> cache_;
};

const DistanceMatrix& pairwise_distances(Prepared& prep) {
  if (!prep.distances) {
    const std::size_t n = prep.reprs.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d[i][j] = representation_distance(prep.reprs[i], prep.reprs[j]);
        d[j][i] = d[i][j];
      }
    }
    prep.distances.emplace(std::move(d));
  }
  return *prep.distances;
}

// Binary search for the epsilon whose nonuniform sampling yields a typical
// count closest to k (ties prefer the larger epsilon, i.e. fewer windows).
TypicalSelection nonuniform_for_k(const SnapshotSeries& series, const QuerySet& queries,
                                  std::size_t k) {
  auto run = [&](double eps) { return nonuniform_sample(series, eps, queries); };

  double hi = 1.0;
  TypicalSelection best = run(hi);
  auto score = [&](const TypicalSelection& sel) {
    const auto count = static_cast<std::int64_t>(sel.typical_ids.size());
    return std::abs(count - static_cast<std::int64_t>(k));
  };
  for (int i = 0; i < 12 && best.typical_ids.size() > k; ++i) {
    hi *= 4.0;
    TypicalSelection cand = run(hi);
    if (score(cand) <= score(best)) best = std::move(cand);
    if (best.typical_ids.size() <= k) break;
  }
  double lo = 1e-9;
  {
    TypicalSelection cand = run(lo);
    if (score(cand) < score(best)) best = std::move(cand);
  }
  for (int i = 0; i < 40; ++i) {
    const double mid = std::sqrt(lo * hi);  // epsilon spans decades
    TypicalSelection cand = run(mid);
    if (score(cand) <= score(best)) best = std::move(cand);
    if (cand.typical_ids.size() > k)
      lo = mid;
    else
      hi = mid;
    if (score(best) == 0 && cand.typical_ids.size() == k) break;
  }
  return best;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  auto network = std::make_shared<const RoadNetwork>(
      load_network(config.network_path, config.vertices_path));
  const SnapshotSeries series = load_series(network, config.series_path);
  validate_experiment_config(config, series.size());

  const QuerySet queries =
      config.queries_source == "file"
          ? load_query_paths(*network, config.queries_path)
          : default_query_set(series, config.query_count, Rng::derive(config.seed, 0x51));

  ReprWorkbench workbench(series, config.repr, config.seed);
  const std::size_t n = series.size();

  ExperimentResult result;
  json meta;
  meta["seed"] = config.seed;
  meta["n_snapshots"] = n;
  meta["query_set_size"] = queries.paths.size();
  meta["queries_source"] = config.queries_source;
  meta["rows"] = json::array();
  std::vector<std::string> warnings;

  for (const MethodSpec& method : config.methods) {
    for (const std::size_t k : config.sweep_k) {
      ResultRow row;
      row.method = method.method_label();
      row.repr = method.repr_label();
      row.requested_k = k;

      const auto t_select = Clock::now();
      TypicalSelection selection;
      double prep_time = 0.0;
      switch (method.kind) {
        case MethodSpec::Kind::kTimeUniform: {
          const std::size_t step = std::max<std::size_t>(
              1, static_cast<std::size_t>(std::llround(static_cast<double>(n) /
                                                       static_cast<double>(k))));
          selection = uniform_sample(series, step, 0);
          break;
        }
        case MethodSpec::Kind::kTimeNonuniform: {
          selection = nonuniform_for_k(series, queries, k);
          break;
        }
        case MethodSpec::Kind::kReprCluster: {
          Prepared& prep = workbench.get(method.repr_tag);
          prep_time = prep.prep_time_s;
          for (const std::string& w : prep.warnings)
            if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
              warnings.push_back(w);
          ClusteringResult clusters;
          if (method.cluster == "kmeans") {
            if (prep.is_set)
              throw ValidationError("vertex-set representations cannot feed kmeans");
            clusters = kmeans(prep.vectors, static_cast<int>(k), Rng::derive(config.seed, 0x6b));
          } else {
            clusters = hierarchical_k(pairwise_distances(prep), static_cast<int>(k));
          }
          selection = typical_from_clusters(series, clusters);
          break;
        }
      }
      if (config.measure_timings) row.select_time_s = prep_time + seconds_since(t_select);

      validate_selection(selection, n);
      row.k = selection.typical_ids.size();
      row.shortfall = row.k != k;

      std::vector<double> errors(n);
      for (std::size_t i = 0; i < n; ++i)
        errors[i] =
            snapshot_error(*network, series.at(selection.assignment[i]), series.at(i), queries);
      row.mean_error = pairwise_sum(errors) / static_cast<double>(n);
      row.max_error = *std::max_element(errors.begin(), errors.end());

      if (config.measure_timings && method.kind == MethodSpec::Kind::kReprCluster) {
        Prepared& prep = workbench.get(method.repr_tag);
        const auto t_match = Clock::now();
        for (std::size_t i = 0; i < n; ++i) {
          const Representation probe_repr =
              convert_snapshot(prep.spec, *network, series.at(i));
          double best = std::numeric_limits<double>::infinity();
          for (std::size_t id : selection.typical_ids)
            best = std::min(best, representation_distance(probe_repr, prep.reprs[id]));
          (void)best;
        }
        row.match_time_s = seconds_since(t_match) / static_cast<double>(n);
      }

      json meta_row;
      meta_row["method"] = row.method;
      meta_row["repr"] = row.repr;
      meta_row["requested_k"] = row.requested_k;
      meta_row["actual_k"] = row.k;
      meta_row["shortfall"] = row.shortfall;
      meta_row["method_tag"] = selection.method_tag;
      meta["rows"].push_back(meta_row);

      result.rows.push_back(std::move(row));
    }
  }

  std::sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.repr, a.requested_k) < std::tie(b.method, b.repr, b.requested_k);
  });
  meta["warnings"] = warnings;
  result.metadata_json = meta.dump(2) + "\n";
  return result;
}

std::string results_csv(const ExperimentResult& result) {
  std::string out = "method,repr,k,mean_error,max_error,select_time_s,match_time_s\n";
  for (const ResultRow& row : result.rows) {
    out += row.method;
    out += ',';
    out += row.repr;
    out += ',';
    out += std::to_string(row.k);
    out += ',';
    out += format_double(row.mean_error);
    out += ',';
    out += format_double(row.max_error);
    out += ',';
    out += format_double(row.select_time_s);
    out += ',';
    out += format_double(row.match_time_s);
    out += '\n';
  }
  return out;
}

void write_results(const ExperimentResult& result, const std::string& csv_path) {
  write_file(csv_path, results_csv(result));
  write_file(csv_path + ".meta.json", result.metadata_json);
}

std::vector<TimingRow> timing_report(const std::vector<const TypicalSnapshotCatalog*>& catalogs,
                                     const std::vector<const Snapshot*>& probes,
                                     int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("timing_report: repetitions must be >= 1");
  if (probes.empty()) throw std::invalid_argument("timing_report: no probes");
  std::vector<TimingRow> rows;
  for (const TypicalSnapshotCatalog* catalog : catalogs) {
    TimingRow row;
    row.family = catalog->spec().tag();

    double convert_total = 0.0;
    double scan_total = 0.0;
    std::size_t scans = 0;
    for (const Snapshot* probe : probes) {
      // untimed warmup keeps cold-cache effects out of the means
      Representation repr = convert_snapshot(catalog->spec(), catalog->network(), *probe);
      for (int r = 0; r < repetitions; ++r) {
        const auto t0 = Clock::now();
        repr = convert_snapshot(catalog->spec(), catalog->network(), *probe);
        convert_total += seconds_since(t0);
        const auto t1 = Clock::now();
        for (std::size_t i = 0; i < catalog->size(); ++i)
          (void)representation_distance(repr, catalog->entry(i).repr);
        scan_total += seconds_since(t1);
        ++scans;
      }
    }
    const double scan_count = static_cast<double>(scans);
    row.graph_convert_s = convert_total / scan_count;
    row.similarity_per_entry_s = scan_total / scan_count / static_cast<double>(catalog->size());
    rows.push_back(row);
  }
  return rows;
}

double mean_similarity_scan_s(const TypicalSnapshotCatalog& catalog, const Snapshot& probe,
                              int repetitions) {
  if (repetitions < 1)
    throw std::invalid_argument("mean_similarity_scan_s: repetitions must be >= 1");
  const Representation repr = convert_snapshot(catalog.spec(), catalog.network(), probe);
  for (std::size_t i = 0; i < catalog.size(); ++i)
    (void)representation_distance(repr, catalog.entry(i).repr);  // warmup
  const auto t0 = Clock::now();
  for (int r = 0; r < repetitions; ++r) {
    for (std::size_t i = 0; i < catalog.size(); ++i)
      (void)representation_distance(repr, catalog.entry(i).repr);
  }
  return seconds_since(t0) / repetitions;
}

}  // namespace roadsnap

#include "roadsnap/matching.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "roadsnap/csv.hpp"
#include "roadsnap/io.hpp"
#include "roadsnap/pathfinding.hpp"

namespace roadsnap {

namespace {

using json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const char* base_tag(ReprMethod base) {
  switch (base) {
    case ReprMethod::kEdge:
      return "edge";
    case ReprMethod::kEdgeDelta:
      return "edge-delta";
    case ReprMethod::kAggEdge:
      return "agg-edge";
    case ReprMethod::kVertexBc:
      return "vertex-bc";
    case ReprMethod::kVertexSet:
      return "vertex-set";
  }
  return "?";
}

}  // namespace

ReprMethod repr_method_from_tag(const std::string& tag) {
  if (tag == "edge") return ReprMethod::kEdge;
  if (tag == "edge-delta") return ReprMethod::kEdgeDelta;
  if (tag == "agg-edge") return ReprMethod::kAggEdge;
  if (tag == "vertex-bc") return ReprMethod::kVertexBc;
  if (tag == "vertex-set") return ReprMethod::kVertexSet;
  throw ConfigError("unknown representation method: " + tag);
}

std::string ReprSpec::tag() const {
  std::string out = base_tag(base);
  if (use_cv) out += "-cv";
  if (use_pca) out += "-pca";
  return out;
}

Representation convert_snapshot(const ReprSpec& spec, const RoadNetwork& network,
                                const Snapshot& snapshot) {
  Representation repr;
  switch (spec.base) {
    case ReprMethod::kEdge:
    case ReprMethod::kEdgeDelta: {
      FeatureVector vec;
      if (spec.base == ReprMethod::kEdgeDelta) {
        if (spec.delta_reference.size() != snapshot.weights.size())
          throw ConfigError("edge-delta conversion requires a reference snapshot of matching size");
        const Snapshot reference{0, spec.delta_reference};
        vec = delta_weight_vector(snapshot, reference);
      } else {
        vec = weight_vector(snapshot);
      }
      if (spec.use_cv) vec = apply_cv_mask(vec, spec.cv_mask);
      if (spec.use_pca) vec = pca_project(spec.pca, vec);
      repr.vec = std::move(vec);
      repr.vec.method_tag = spec.tag();
      break;
    }
    case ReprMethod::kAggEdge: {
      if (spec.typical_paths.paths.empty())
        throw ConfigError("agg-edge conversion requires typical paths in the catalog");
      repr.vec = aggregated_vector(network, snapshot, spec.typical_paths);
      break;
    }
    case ReprMethod::kVertexBc: {
      if (spec.typical_vertices.vertices.empty())
        throw ConfigError("vertex-bc conversion requires typical vertices in the catalog");
      if (spec.max_reach.size() != spec.typical_vertices.vertices.size())
        throw ConfigError("vertex-bc conversion requires training reach maxima");
      repr.vec.method_tag = "vertex-bc";
      repr.vec.values.reserve(spec.typical_vertices.vertices.size());
      for (std::size_t k = 0; k < spec.typical_vertices.vertices.size(); ++k) {
        const VertexId v = spec.typical_vertices.vertices[k];
        const auto reached = bounded_expansion(network, snapshot, v, spec.t0_s);
        repr.vec.values.push_back(static_cast<double>(spec.max_reach[k]) /
                                  static_cast<double>(reached.size()));
      }
      break;
    }
    case ReprMethod::kVertexSet: {
      if (spec.typical_vertices.vertices.empty())
        throw ConfigError("vertex-set conversion requires typical vertices in the catalog");
      repr.is_set = true;
      repr.sets.typical_vertices = spec.typical_vertices.vertices;
      repr.sets.sets.reserve(spec.typical_vertices.vertices.size());
      for (VertexId v : spec.typical_vertices.vertices)
        repr.sets.sets.push_back(bounded_expansion(network, snapshot, v, spec.t0_s));
      break;
    }
  }
  return repr;
}

double representation_distance(const Representation& a, const Representation& b) {
  if (a.is_set != b.is_set)
    throw ValidationError("representation_distance: mixed vector and set representations");
  if (a.is_set) return vertex_set_distance(a.sets, b.sets);
  return euclidean_distance(a.vec, b.vec);
}

ReprSpec make_edge_spec(const SnapshotSeries& series, bool delta, bool use_cv, double thresh_cv,
                        bool use_pca, std::size_t pca_dim) {
  ReprSpec spec;
  spec.base = delta ? ReprMethod::kEdgeDelta : ReprMethod::kEdge;
  spec.use_cv = use_cv;
  spec.use_pca = use_pca;
  if (delta) spec.delta_reference = series.at(0).weights;

  std::vector<FeatureVector> vectors;
  vectors.reserve(series.size());
  for (const Snapshot& s : series.snapshots())
    vectors.push_back(delta ? delta_weight_vector(s, series.at(0)) : weight_vector(s));

  if (use_cv) {
    spec.cv_mask = make_cv_mask(edge_stats(series), thresh_cv);
    for (FeatureVector& v : vectors) v = apply_cv_mask(v, spec.cv_mask);
  }
  if (use_pca) spec.pca = fit_pca(vectors, pca_dim);
  return spec;
}

ReprSpec make_agg_edge_spec(TypicalPathSet typical_paths) {
  if (typical_paths.paths.empty())
    throw ConfigError("make_agg_edge_spec: typical path set is empty");
  ReprSpec spec;
  spec.base = ReprMethod::kAggEdge;
  spec.typical_paths = std::move(typical_paths);
  return spec;
}

ReprSpec make_vertex_spec(const ReachabilityTable& table, TypicalVertexSet typical_vertices,
                          bool set_representation) {
  if (typical_vertices.vertices.empty())
    throw ConfigError("make_vertex_spec: typical vertex set is empty");
  ReprSpec spec;
  spec.base = set_representation ? ReprMethod::kVertexSet : ReprMethod::kVertexBc;
  spec.t0_s = table.budget_s;
  spec.max_reach.reserve(typical_vertices.vertices.size());
  for (VertexId v : typical_vertices.vertices) {
    std::size_t max_reach = 0;
    for (std::size_t i = 0; i < table.num_snapshots; ++i)
      max_reach = std::max(max_reach, table.s[i][v].size());
    spec.max_reach.push_back(max_reach);
  }
  spec.typical_vertices = std::move(typical_vertices);
  return spec;
}

TypicalSnapshotCatalog::TypicalSnapshotCatalog(std::shared_ptr<const RoadNetwork> network,
                                               ReprSpec spec, double theta)
    : network_(std::move(network)), spec_(std::move(spec)), theta_(theta) {
  if (!network_) throw ConfigError("catalog requires a network");
}

void TypicalSnapshotCatalog::add_entry(std::size_t snapshot_id, const Snapshot& snapshot) {
  Entry entry;
  entry.snapshot_id = snapshot_id;
  entry.snapshot = snapshot;
  entry.repr = convert_snapshot(spec_, *network_, snapshot);
  entry.index = std::make_shared<ShortestPathIndex>(*network_, snapshot,
                                                    static_cast<std::int64_t>(snapshot_id));
  entries_.push_back(std::move(entry));
}

TypicalSnapshotCatalog build_catalog(const SnapshotSeries& series,
                                     const TypicalSelection& selection, ReprSpec spec,
                                     std::optional<double> theta) {
  validate_selection(selection, series.size());
  TypicalSnapshotCatalog catalog(series.network_ptr(), std::move(spec), 0.0);
  for (std::size_t id : selection.typical_ids) catalog.add_entry(id, series.at(id));

  if (theta) {
    catalog.set_theta(*theta);
    return catalog;
  }

  // Default threshold: the worst training-time distance between a snapshot
  // and its assigned typical, so anything as close as a training member
  // still matches.
  std::vector<const Representation*> typical_repr(series.size(), nullptr);
  for (std::size_t i = 0; i < catalog.size(); ++i)
    typical_repr[catalog.entry(i).snapshot_id] = &catalog.entry(i).repr;
  double worst = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Representation repr = convert_snapshot(catalog.spec(), series.network(), series.at(i));
    worst = std::max(worst, representation_distance(repr, *typical_repr[selection.assignment[i]]));
  }
  catalog.set_theta(worst);
  return catalog;
}

MatchOutcome match(const Snapshot& probe, const TypicalSnapshotCatalog& catalog) {
  if (catalog.size() == 0) throw ConfigError("match: catalog is empty");

  MatchOutcome outcome;
  const auto t0 = std::chrono::steady_clock::now();
  const Representation repr = convert_snapshot(catalog.spec(), catalog.network(), probe);
  outcome.t_repr_s = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_entry = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const double d = representation_distance(repr, catalog.entry(i).repr);
    if (d < best) {  // entries ascend by id: ties keep the smaller id
      best = d;
      best_entry = i;
    }
  }
  outcome.t_similarity_total_s = seconds_since(t1);
  outcome.k = catalog.size();
  outcome.distance = best;
  if (best <= catalog.theta()) outcome.matched_id = catalog.entry(best_entry).snapshot_id;
  return outcome;
}

std::size_t admit_new_typical(const Snapshot& probe, TypicalSnapshotCatalog& catalog) {
  if (probe.weights.size() != catalog.network().num_edges())
    throw ValidationError("admit_new_typical: probe does not fit the catalog's network");
  std::size_t next_id = 0;
  for (const auto& entry : catalog.entries()) next_id = std::max(next_id, entry.snapshot_id + 1);
  catalog.add_entry(next_id, probe);
  return next_id;
}

const MatchOutcome& Matcher::match_probe(const Snapshot& probe) {
  const bool hit = cached_probe == &probe && cached_timestamp_ == probe.timestamp_s &&
                   cached_catalog_size_ == catalog_->size();
  if (!hit) {
    cached_outcome_ = match(probe, *catalog_);
    cached_probe = &probe;
    cached_timestamp_ = probe.timestamp_s;
    cached_catalog_size_ = catalog_->size();
    ++conversions_;
  }
  return cached_outcome_;
}

QueryAnswer Matcher::answer_query(const Snapshot& probe, VertexId source, VertexId target) {
  const MatchOutcome& outcome = match_probe(probe);
  if (outcome.new_typical())
    throw ConfigError("answer_query: probe matches no typical snapshot; admit it first");

  const TypicalSnapshotCatalog::Entry* matched = nullptr;
  for (const auto& entry : catalog_->entries())
    if (entry.snapshot_id == *outcome.matched_id) matched = &entry;

  QueryAnswer answer;
  answer.matched_id = *outcome.matched_id;
  const auto route = matched->index->query(source, target);
  if (!route) return answer;
  answer.reachable = true;
  answer.distance_s = route->distance_s;
  answer.path = route->path;
  answer.probe_travel_time_s = path_travel_time(catalog_->network(), probe, answer.path);
  answer.relative_error =
      answer.path.edges.empty()
          ? 0.0
          : std::abs(answer.distance_s - answer.probe_travel_time_s) / answer.probe_travel_time_s;
  return answer;
}

namespace {

constexpr int kCatalogVersion = 1;

std::string artifact_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void save_vector_file(const std::string& path, const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<double> load_vector_file(const std::string& path) {
  std::vector<double> values;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    values.push_back(parse_double(lines[i], path, i + 1));
  }
  return values;
}

}  // namespace

void save_catalog(const TypicalSnapshotCatalog& catalog, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const ReprSpec& spec = catalog.spec();

  save_network(catalog.network(), artifact_path(dir, "network.csv"),
               artifact_path(dir, "vertices.csv"));

  // Typical snapshots as a canonical series file. Positions stand in for
  // timestamps (admitted snapshots may collide with training timestamps);
  // the real timestamps live in catalog.json.
  {
    std::string out = "edge_id,timestamp_s,travel_time_s\n";
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const Snapshot& snap = catalog.entry(i).snapshot;
      for (std::size_t e = 0; e < snap.weights.size(); ++e) {
        out += std::to_string(e);
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += format_double(snap.weights[e]);
        out += '\n';
      }
    }
    write_file(artifact_path(dir, "snapshots.csv"), out);
  }

  json meta;
  meta["version"] = kCatalogVersion;
  meta["theta"] = catalog.theta();
  meta["repr"]["base"] = base_tag(spec.base);
  meta["repr"]["tag"] = spec.tag();
  meta["repr"]["use_cv"] = spec.use_cv;
  meta["repr"]["use_pca"] = spec.use_pca;
  meta["repr"]["t0_s"] = spec.t0_s;
  meta["entries"] = json::array();
  for (const auto& entry : catalog.entries()) {
    json e;
    e["snapshot_id"] = entry.snapshot_id;
    e["timestamp_s"] = entry.snapshot.timestamp_s;
    meta["entries"].push_back(e);
  }

  if (spec.use_cv) {
    meta["repr"]["cv_threshold"] = spec.cv_mask.threshold;
    std::string out = "edge_id\n";
    for (EdgeId e : spec.cv_mask.kept) {
      out += std::to_string(e);
      out += '\n';
    }
    write_file(artifact_path(dir, "cv_mask.csv"), out);
  }
  if (spec.use_pca) {
    meta["repr"]["pca_input_dim"] = spec.pca.input_dim;
    meta["repr"]["pca_output_dim"] = spec.pca.output_dim;
    save_vector_file(artifact_path(dir, "pca_mean.csv"), spec.pca.mean);
    save_vector_file(artifact_path(dir, "pca_components.csv"), spec.pca.components);
  }
  if (spec.base == ReprMethod::kEdgeDelta)
    save_vector_file(artifact_path(dir, "delta_reference.csv"), spec.delta_reference);
  if (spec.base == ReprMethod::kAggEdge) {
    save_path_set(spec.typical_paths, artifact_path(dir, "typical_paths.csv"));
    meta["repr"]["path_params"]["pnum"] = spec.typical_paths.params.pnum;
    meta["repr"]["path_params"]["l_min_m"] = spec.typical_paths.params.l_min_m;
    meta["repr"]["path_params"]["l_max_m"] = spec.typical_paths.params.l_max_m;
    meta["repr"]["path_params"]["jaccard_max"] = spec.typical_paths.params.jaccard_max;
  }
  if (spec.base == ReprMethod::kVertexBc || spec.base == ReprMethod::kVertexSet) {
    save_typical_vertices(spec.typical_vertices, artifact_path(dir, "typical_vertices.csv"));
    meta["max_reach"] = spec.max_reach;
  }

  // Persisted representations, so probes are compared against exactly what
  // was saved.
  if (spec.base == ReprMethod::kVertexSet) {
    std::string out = "entry,rank,vertex_ids\n";
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const auto& sets = catalog.entry(i).repr.sets.sets;
      for (std::size_t r = 0; r < sets.size(); ++r) {
        out += std::to_string(i);
        out += ',';
        out += std::to_string(r);
        out += ',';
        for (std::size_t j = 0; j < sets[r].size(); ++j) {
          if (j) out += ';';
          out += std::to_string(sets[r][j]);
        }
        out += '\n';
      }
    }
    write_file(artifact_path(dir, "representations.csv"), out);
  } else {
    std::vector<FeatureVector> vectors;
    vectors.reserve(catalog.size());
    for (const auto& entry : catalog.entries()) vectors.push_back(entry.repr.vec);
    save_feature_matrix(vectors, artifact_path(dir, "representations.csv"));
  }

  write_file(artifact_path(dir, "catalog.json"), meta.dump(2) + "\n");
}

TypicalSnapshotCatalog load_catalog(const std::string& dir) {
  std::ifstream meta_in(artifact_path(dir, "catalog.json"));
  if (!meta_in) throw ConfigError("load_catalog: missing catalog.json in " + dir);
  json meta = json::parse(meta_in, nullptr, /*allow_exceptions=*/true);
  if (meta.at("version").get<int>() != kCatalogVersion)
    throw ConfigError("load_catalog: unsupported catalog version");

  auto network = std::make_shared<const RoadNetwork>(
      load_network(artifact_path(dir, "network.csv"), artifact_path(dir, "vertices.csv")));

  ReprSpec spec;
  spec.base = repr_method_from_tag(meta.at("repr").at("base").get<std::string>());
  spec.use_cv = meta.at("repr").at("use_cv").get<bool>();
  spec.use_pca = meta.at("repr").at("use_pca").get<bool>();
  spec.t0_s = meta.at("repr").at("t0_s").get<double>();

  if (spec.use_cv) {
    spec.cv_mask.threshold = meta.at("repr").at("cv_threshold").get<double>();
    const auto lines = read_lines(artifact_path(dir, "cv_mask.csv"));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      spec.cv_mask.kept.push_back(parse_u32(lines[i], "cv_mask.csv", i + 1));
    }
  }
  if (spec.use_pca) {
    spec.pca.input_dim = meta.at("repr").at("pca_input_dim").get<std::size_t>();
    spec.pca.output_dim = meta.at("repr").at("pca_output_dim").get<std::size_t>();
    spec.pca.mean = load_vector_file(artifact_path(dir, "pca_mean.csv"));
    spec.pca.components = load_vector_file(artifact_path(dir, "pca_components.csv"));
    if (spec.pca.mean.size() != spec.pca.input_dim ||
        spec.pca.components.size() != spec.pca.input_dim * spec.pca.output_dim)
      throw ConfigError("load_catalog: PCA artifact dimensions do not match catalog.json");
  }
  if (spec.base == ReprMethod::kEdgeDelta)
    spec.delta_reference = load_vector_file(artifact_path(dir, "delta_reference.csv"));
  if (spec.base == ReprMethod::kAggEdge) {
    PathSelectionParams params;
    params.pnum = meta.at("repr").at("path_params").at("pnum").get<std::size_t>();
    params.l_min_m = meta.at("repr").at("path_params").at("l_min_m").get<double>();
    params.l_max_m = meta.at("repr").at("path_params").at("l_max_m").get<double>();
    params.jaccard_max = meta.at("repr").at("path_params").at("jaccard_max").get<double>();
    spec.typical_paths =
        load_path_set(*network, artifact_path(dir, "typical_paths.csv"), params);
  }
  if (spec.base == ReprMethod::kVertexBc || spec.base == ReprMethod::kVertexSet) {
    spec.typical_vertices = load_typical_vertices(artifact_path(dir, "typical_vertices.csv"));
    spec.max_reach = meta.at("max_reach").get<std::vector<std::size_t>>();
  }

  TypicalSnapshotCatalog catalog(network, std::move(spec), meta.at("theta").get<double>());

  SnapshotSeries stored = load_series(network, artifact_path(dir, "snapshots.csv"));
  if (stored.size() != meta.at("entries").size())
    throw ConfigError("load_catalog: snapshots.csv disagrees with catalog.json entry count");
  for (std::size_t i = 0; i < stored.size(); ++i) {
    Snapshot snap = stored.at(i);
    snap.timestamp_s = meta.at("entries")[i].at("timestamp_s").get<std::int64_t>();
    catalog.add_entry(meta.at("entries")[i].at("snapshot_id").get<std::size_t>(), snap);
  }
  return catalog;
}

}  // namespace roadsnap

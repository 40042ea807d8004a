#include "roadsnap/edge_repr.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "roadsnap/rng.hpp"

namespace roadsnap {

double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.values.size() != b.values.size())
    throw ValidationError("euclidean_distance: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

FeatureVector weight_vector(const Snapshot& snapshot) {
  return {snapshot.weights, "edge"};
}

FeatureVector delta_weight_vector(const Snapshot& snapshot, const Snapshot& reference) {
  if (snapshot.weights.size() != reference.weights.size())
    throw ValidationError("delta_weight_vector: snapshots disagree on edge count");
  FeatureVector out;
  out.method_tag = "edge-delta";
  out.values.resize(snapshot.weights.size());
  for (std::size_t i = 0; i < snapshot.weights.size(); ++i)
    out.values[i] = snapshot.weights[i] - reference.weights[i];
  return out;
}

CvMask make_cv_mask(const EdgeStats& stats, double thresh_cv) {
  if (thresh_cv < 0.0) throw std::invalid_argument("make_cv_mask: threshold must be >= 0");
  CvMask mask;
  mask.threshold = thresh_cv;
  for (std::size_t e = 0; e < stats.cv.size(); ++e)
    if (stats.cv[e] >= thresh_cv) mask.kept.push_back(static_cast<EdgeId>(e));
  if (mask.kept.empty()) {
    std::ostringstream msg;
    msg << "cv filter at threshold " << thresh_cv
        << " removes every edge; lower the threshold";
    throw ValidationError(msg.str());
  }
  return mask;
}

FeatureVector apply_cv_mask(const FeatureVector& vec, const CvMask& mask) {
  FeatureVector out;
  out.method_tag = vec.method_tag + "-cv";
  out.values.reserve(mask.kept.size());
  for (EdgeId e : mask.kept) out.values.push_back(vec.values.at(e));
  return out;
}

std::vector<FeatureVector> cv_filter(const std::vector<FeatureVector>& vectors,
                                     const EdgeStats& stats, double thresh_cv) {
  const CvMask mask = make_cv_mask(stats, thresh_cv);
  std::vector<FeatureVector> out;
  out.reserve(vectors.size());
  for (const FeatureVector& v : vectors) out.push_back(apply_cv_mask(v, mask));
  return out;
}

PcaModel fit_pca(const std::vector<FeatureVector>& vectors, std::size_t d) {
  if (vectors.empty()) throw std::invalid_argument("fit_pca: no vectors");
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors[0].dimension();
  for (const FeatureVector& v : vectors)
    if (v.dimension() != dim) throw ValidationError("fit_pca: inconsistent dimensions");
  if (d < 1 || d > std::min(n, dim))
    throw std::invalid_argument("fit_pca: d must lie in [1, min(n, dim)]");

  Eigen::MatrixXd data(n, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j) data(i, j) = vectors[i].values[j];

  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;

  PcaModel model;
  model.input_dim = dim;
  model.output_dim = d;
  model.mean.assign(mean.data(), mean.data() + dim);
  model.components.assign(d * dim, 0.0);

  // For wide data the dim x dim covariance is needless; the n x n Gram
  // matrix has the same nonzero spectrum and maps back via X^T v.
  if (dim > n) {
    const Eigen::MatrixXd gram = centered * centered.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw ValidationError("fit_pca: eigensolver failed");
    for (std::size_t j = 0; j < d; ++j) {
      const auto col = static_cast<Eigen::Index>(n - 1 - j);  // descending order
      const double lambda = solver.eigenvalues()(col);
      if (lambda > 1e-12) {
        Eigen::VectorXd component = centered.transpose() * solver.eigenvectors().col(col);
        component /= component.norm();
        for (std::size_t k = 0; k < dim; ++k) model.components[j * dim + k] = component(k);
      }
      // near-zero eigenvalue: the data has no extent in this direction, a
      // zero row projects it to 0 exactly
    }
  } else {
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw ValidationError("fit_pca: eigensolver failed");
    for (std::size_t j = 0; j < d; ++j) {
      const auto col = static_cast<Eigen::Index>(dim - 1 - j);
      const Eigen::VectorXd component = solver.eigenvectors().col(col);
      for (std::size_t k = 0; k < dim; ++k) model.components[j * dim + k] = component(k);
    }
  }

  // Sign convention: each component's largest-magnitude coordinate positive.
  for (std::size_t j = 0; j < d; ++j) {
    double* row = model.components.data() + j * dim;
    std::size_t arg = 0;
    for (std::size_t k = 1; k < dim; ++k)
      if (std::abs(row[k]) > std::abs(row[arg])) arg = k;
    if (row[arg] < 0.0)
      for (std::size_t k = 0; k < dim; ++k) row[k] = -row[k];
  }
  return model;
}

FeatureVector pca_project(const PcaModel& model, const FeatureVector& vec) {
  if (vec.dimension() != model.input_dim)
    throw ValidationError("pca_project: dimension mismatch");
  FeatureVector out;
  out.method_tag = vec.method_tag + "-pca";
  out.values.resize(model.output_dim);
  for (std::size_t j = 0; j < model.output_dim; ++j) {
    const double* row = model.components.data() + j * model.input_dim;
    double s = 0.0;
    for (std::size_t k = 0; k < model.input_dim; ++k)
      s += row[k] * (vec.values[k] - model.mean[k]);
    out.values[j] = s;
  }
  return out;
}

std::vector<FeatureVector> pca_reduce(const std::vector<FeatureVector>& vectors, std::size_t d) {
  const PcaModel model = fit_pca(vectors, d);
  std::vector<FeatureVector> out;
  out.reserve(vectors.size());
  for (const FeatureVector& v : vectors) out.push_back(pca_project(model, v));
  return out;
}

RegionPartition partition_regions(const RoadNetwork& network, std::size_t pnum) {
  if (network.num_vertices() == 0)
    throw ValidationError("partition_regions: network has no vertices");

  RegionPartition part;
  part.box = network.bounding_box();
  const double cell_w = (part.box.x_max - part.box.x_min) / RegionPartition::kGrid;
  const double cell_h = (part.box.y_max - part.box.y_min) / RegionPartition::kGrid;

  auto cell_index = [&](double coord, double lo, double width) {
    if (width <= 0.0) return 0;
    const int idx = static_cast<int>((coord - lo) / width);
    return std::clamp(idx, 0, RegionPartition::kGrid - 1);
  };

  part.cell_of.resize(network.num_vertices());
  for (const Vertex& v : network.vertices()) {
    const int col = cell_index(v.x, part.box.x_min, cell_w);
    const int row = cell_index(v.y, part.box.y_min, cell_h);
    const int cell = row * RegionPartition::kGrid + col;
    part.cell_of[v.id] = cell;
    ++part.vertex_count[cell];
  }

  // quota_i = pnum * |V_i| / |V|, rounded by largest remainder so the total
  // is exactly pnum.
  const double total = static_cast<double>(network.num_vertices());
  std::array<double, RegionPartition::kCells> exact{};
  std::size_t assigned = 0;
  for (int c = 0; c < RegionPartition::kCells; ++c) {
    exact[c] = static_cast<double>(pnum) * static_cast<double>(part.vertex_count[c]) / total;
    part.quota[c] = static_cast<std::size_t>(std::floor(exact[c]));
    assigned += part.quota[c];
  }
  std::array<int, RegionPartition::kCells> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double fa = exact[a] - std::floor(exact[a]);
    const double fb = exact[b] - std::floor(exact[b]);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  for (int i = 0; assigned < pnum; ++i) {
    ++part.quota[order[static_cast<std::size_t>(i) % RegionPartition::kCells]];
    ++assigned;
  }
  return part;
}

double path_jaccard(const Path& a, const Path& b) {
  const std::unordered_set<EdgeId> set_a(a.edges.begin(), a.edges.end());
  const std::unordered_set<EdgeId> set_b(b.edges.begin(), b.edges.end());
  std::size_t inter = 0;
  for (EdgeId e : set_a)
    if (set_b.count(e)) ++inter;
  const std::size_t uni = set_a.size() + set_b.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Path> dedup_paths(const std::vector<Path>& candidates, double jaccard_max) {
  if (jaccard_max < 0.0 || jaccard_max > 1.0)
    throw std::invalid_argument("dedup_paths: jaccard_max must lie in [0,1]");
  std::vector<Path> kept;
  for (const Path& cand : candidates) {
    bool ok = true;
    for (const Path& k : kept) {
      if (path_jaccard(cand, k) > jaccard_max) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(cand);
  }
  return kept;
}

namespace {

enum class GrowthMode { kRandom, kGreedyCv };

// Shared candidate generator behind the three selection strategies. The
// allowed() predicate restricts usable edges (edge-constrained); greedy mode
// swaps the uniform out-edge draw for a max-cv choice gated on
// thresh_cv_low. Per-region RNG streams derive from the master seed, so
// results do not depend on region processing order.
template <typename AllowedFn>
TypicalPathSet grow_paths(const RoadNetwork& network, const RegionPartition& partition,
                          const PathSelectionParams& params, std::uint64_t seed,
                          AllowedFn allowed, GrowthMode mode, const EdgeStats* stats,
                          const char* strategy) {
  TypicalPathSet set;
  set.params = params;

  // Start edges by home region (tail's cell), in edge-id order.
  std::array<std::vector<EdgeId>, RegionPartition::kCells> starts;
  for (const Edge& e : network.edges())
    if (allowed(e.id)) starts[partition.cell_of[e.tail]].push_back(e.id);

  std::vector<char> visited(network.num_edges(), 0);
  for (int region = 0; region < RegionPartition::kCells; ++region) {
    const std::size_t quota = partition.quota[region];
    if (quota == 0) continue;
    if (starts[region].empty()) {
      std::ostringstream msg;
      msg << strategy << ": region " << region << " has no usable start edge; 0/" << quota
          << " paths selected";
      set.warnings.push_back(msg.str());
      continue;
    }

    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(region)));
    std::vector<std::size_t> kept_in_region;  // indices into set.paths
    std::size_t kept = 0;
    const std::size_t budget = params.attempts_per_path * quota;
    for (std::size_t attempt = 0; attempt < budget && kept < quota; ++attempt) {
      const double target_len = rng.uniform(params.l_min_m, params.l_max_m);
      const EdgeId start = starts[region][rng.below(starts[region].size())];

      Path path;
      path.edges.push_back(start);
      visited[start] = 1;
      double length = network.edge(start).length_m;
      bool dead_end = false;
      while (length < target_len) {
        const VertexId at = network.edge(path.edges.back()).head;
        EdgeId next = kInvalidEdge;
        if (mode == GrowthMode::kRandom) {
          std::vector<EdgeId> options;
          for (EdgeId out : network.out_edges(at))
            if (!visited[out] && allowed(out)) options.push_back(out);
          if (!options.empty()) next = options[rng.below(options.size())];
        } else {
          double best_cv = -1.0;
          for (EdgeId out : network.out_edges(at)) {
            if (visited[out] || !allowed(out)) continue;
            if (stats->cv[out] < params.thresh_cv_low) continue;
            if (stats->cv[out] > best_cv) {  // ties keep the smaller edge id
              best_cv = stats->cv[out];
              next = out;
            }
          }
        }
        if (next == kInvalidEdge) {
          dead_end = true;
          break;
        }
        path.edges.push_back(next);
        visited[next] = 1;
        length += network.edge(next).length_m;
      }
      for (EdgeId e : path.edges) visited[e] = 0;

      if (length > params.l_max_m) continue;            // overshot
      if (dead_end && length < params.l_min_m) continue;  // dead-ended short

      bool distinct = true;
      for (std::size_t other : kept_in_region) {
        if (path_jaccard(path, set.paths[other]) > params.jaccard_max) {
          distinct = false;
          break;
        }
      }
      if (!distinct) continue;

      kept_in_region.push_back(set.paths.size());
      set.paths.push_back(std::move(path));
      set.region_of.push_back(region);
      ++kept;
    }
    if (kept < quota) {
      std::ostringstream msg;
      msg << strategy << ": region " << region << " filled " << kept << "/" << quota
          << " paths within the attempt budget";
      set.warnings.push_back(msg.str());
    }
  }
  return set;
}

}  // namespace

TypicalPathSet select_paths_random(const RoadNetwork& network, const RegionPartition& partition,
                                   const PathSelectionParams& params, std::uint64_t seed) {
  return grow_paths(
      network, partition, params, seed, [](EdgeId) { return true; }, GrowthMode::kRandom,
      nullptr, "select_paths_random");
}

TypicalPathSet select_paths_constrained(const RoadNetwork& network,
                                        const RegionPartition& partition, const EdgeStats& stats,
                                        const PathSelectionParams& params, std::uint64_t seed) {
  bool any = false;
  for (double cv : stats.cv) {
    if (cv >= params.thresh_cv) {
      any = true;
      break;
    }
  }
  if (!any) {
    std::ostringstream msg;
    msg << "select_paths_constrained: no edge has cv >= " << params.thresh_cv
        << "; lower thresh_cv";
    throw ValidationError(msg.str());
  }
  return grow_paths(
      network, partition, params, seed,
      [&](EdgeId e) { return stats.cv[e] >= params.thresh_cv; }, GrowthMode::kRandom, &stats,
      "select_paths_constrained");
}

TypicalPathSet select_paths_greedy(const RoadNetwork& network, const RegionPartition& partition,
                                   const EdgeStats& stats, const PathSelectionParams& params,
                                   std::uint64_t seed) {
  return grow_paths(
      network, partition, params, seed, [](EdgeId) { return true; }, GrowthMode::kGreedyCv,
      &stats, "select_paths_greedy");
}

void validate_path_set(const RoadNetwork& network, const TypicalPathSet& set) {
  if (set.paths.size() != set.region_of.size())
    throw ValidationError("path set: region list out of sync");
  for (const Path& p : set.paths) {
    validate_path(network, p, /*require_no_repeats=*/true);
    double length = 0.0;
    for (EdgeId e : p.edges) length += network.edge(e).length_m;
    if (length < set.params.l_min_m || length > set.params.l_max_m) {
      std::ostringstream msg;
      msg << "path static length " << length << " outside [" << set.params.l_min_m << ", "
          << set.params.l_max_m << "]";
      throw ValidationError(msg.str());
    }
  }
  for (std::size_t i = 0; i < set.paths.size(); ++i) {
    for (std::size_t j = i + 1; j < set.paths.size(); ++j) {
      if (set.region_of[i] != set.region_of[j]) continue;
      const double jac = path_jaccard(set.paths[i], set.paths[j]);
      if (jac > set.params.jaccard_max + 1e-12) {
        std::ostringstream msg;
        msg << "paths " << i << " and " << j << " share Jaccard " << jac << " > "
            << set.params.jaccard_max;
        throw ValidationError(msg.str());
      }
    }
  }
}

FeatureVector aggregated_vector(const RoadNetwork& network, const Snapshot& snapshot,
                                const TypicalPathSet& typical_paths) {
  FeatureVector out;
  out.method_tag = "agg-edge";
  out.values.reserve(typical_paths.paths.size());
  for (const Path& p : typical_paths.paths)
    out.values.push_back(path_travel_time(network, snapshot, p));
  return out;
}

}  // namespace roadsnap

#include "roadsnap/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "roadsnap/rng.hpp"

namespace roadsnap {

DistanceMatrix::DistanceMatrix(std::vector<std::vector<double>> values)
    : values_(std::move(values)) {
  const std::size_t n = values_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (values_[i].size() != n) throw ValidationError("distance matrix is not square");
    if (values_[i][i] != 0.0) throw ValidationError("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (values_[i][j] < 0.0) throw ValidationError("distance matrix must be nonnegative");
      if (values_[i][j] != values_[j][i])
        throw ValidationError("distance matrix must be symmetric");
    }
  }
}

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// Canonicalize labels so cluster ids ascend with their smallest member, and
// recompute the representative array in that order.
void canonicalize(ClusteringResult& result, int raw_k,
                  const std::vector<std::size_t>& raw_representatives) {
  std::vector<int> remap(raw_k, -1);
  int next = 0;
  for (int raw : result.labels)
    if (remap[raw] == -1) remap[raw] = next++;
  result.k = next;
  result.representatives.assign(next, 0);
  for (int raw = 0; raw < raw_k; ++raw)
    if (remap[raw] != -1) result.representatives[remap[raw]] = raw_representatives[raw];
  for (int& label : result.labels) label = remap[label];
}

// Medoid of one cluster: member minimizing summed distance to the others,
// ties to the smaller index.
template <typename DistFn>
std::size_t medoid_of(const std::vector<std::size_t>& members, DistFn dist) {
  std::size_t best = members.front();
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t candidate : members) {
    double sum = 0.0;
    for (std::size_t other : members) sum += dist(candidate, other);
    if (sum < best_sum) {
      best_sum = sum;
      best = candidate;
    }
  }
  return best;
}

}  // namespace

ClusteringResult kmeans(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed) {
  const std::size_t n = vectors.size();
  if (n == 0) throw std::invalid_argument("kmeans: no vectors");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kmeans: k must lie in [1, n]");
  const std::size_t dim = vectors[0].dimension();
  for (const FeatureVector& v : vectors)
    if (v.dimension() != dim) throw ValidationError("kmeans: inconsistent dimensions");

  // Farthest-point seeding.
  Rng rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.push_back(vectors[rng.below(n)].values);
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  while (centroids.size() < static_cast<std::size_t>(k)) {
    std::size_t far = 0;
    double far_sq = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_sq[i] = std::min(min_sq[i], sq_distance(vectors[i].values, centroids.back()));
      if (min_sq[i] > far_sq) {
        far_sq = min_sq[i];
        far = i;
      }
    }
    centroids.push_back(vectors[far].values);
  }

  ClusteringResult result;
  result.labels.assign(n, 0);
  constexpr int kMaxIterations = 300;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Assignment, ties to the smaller centroid index.
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = sq_distance(vectors[i].values, centroids[c]);
        if (d < best) {
          best = d;
          labels[i] = c;
        }
      }
    }

    // Repair empty clusters with the point farthest from its centroid.
    std::vector<int> sizes(k, 0);
    for (int label : labels) ++sizes[label];
    for (int c = 0; c < k; ++c) {
      while (sizes[c] == 0) {
        std::size_t far = n;
        double far_sq = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (sizes[labels[i]] < 2) continue;
          const double d = sq_distance(vectors[i].values, centroids[labels[i]]);
          if (d > far_sq) {
            far_sq = d;
            far = i;
          }
        }
        if (far == n) break;  // nothing to donate (k == n edge cases)
        --sizes[labels[far]];
        labels[far] = c;
        ++sizes[c];
      }
    }

    // Update step.
    for (int c = 0; c < k; ++c) std::fill(centroids[c].begin(), centroids[c].end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) centroids[labels[i]][d] += vectors[i].values[d];
    for (int c = 0; c < k; ++c)
      for (std::size_t d = 0; d < dim; ++d) centroids[c][d] /= sizes[c];

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      objective += sq_distance(vectors[i].values, centroids[labels[i]]);
    result.iteration_objective.push_back(objective);

    const bool converged = labels == result.labels && iter > 0;
    result.labels = std::move(labels);
    if (converged) break;
  }

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n; ++i) members[result.labels[i]].push_back(i);
  std::vector<std::size_t> raw_reps(k, 0);
  for (int c = 0; c < k; ++c)
    raw_reps[c] = medoid_of(members[c], [&](std::size_t a, std::size_t b) {
      return std::sqrt(sq_distance(vectors[a].values, vectors[b].values));
    });

  canonicalize(result, k, raw_reps);
  std::ostringstream tag;
  tag << "kmeans(k=" << k << ")";
  result.method_tag = tag.str();
  return result;
}

ClusteringResult kmeans_adaptive(const std::vector<FeatureVector>& vectors, double radius_max,
                                 std::uint64_t seed) {
  if (radius_max < 0.0) throw std::invalid_argument("kmeans_adaptive: radius must be >= 0");
  const std::size_t n = vectors.size();
  if (n == 0) throw std::invalid_argument("kmeans_adaptive: no vectors");
  for (int k = 1; static_cast<std::size_t>(k) <= n; ++k) {
    ClusteringResult result = kmeans(vectors, k, seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t medoid = result.representatives[result.labels[i]];
      worst = std::max(worst,
                       std::sqrt(sq_distance(vectors[i].values, vectors[medoid].values)));
    }
    if (worst <= radius_max || static_cast<std::size_t>(k) == n) {
      std::ostringstream tag;
      tag << "kmeans-adaptive(radius=" << radius_max << ",k=" << result.k << ")";
      result.method_tag = tag.str();
      return result;
    }
  }
  throw std::logic_error("kmeans_adaptive: unreachable");
}

namespace {

ClusteringResult agglomerate(const DistanceMatrix& distances, double tau, int target_k,
                             const char* tag_prefix) {
  const std::size_t n = distances.size();
  if (n == 0) throw std::invalid_argument("hierarchical: empty distance matrix");

  // Active cluster slots; a merge folds the larger slot into the smaller.
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<bool> active(n, true);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  // Complete linkage between slots.
  std::vector<std::vector<double>> linkage(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) linkage[i][j] = distances.at(i, j);

  std::size_t active_count = n;
  while (active_count > 1) {
    if (target_k >= 0 && active_count == static_cast<std::size_t>(target_k)) break;
    std::size_t best_i = n, best_j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (linkage[i][j] < best) {  // ties keep the smallest (i, j) pair
          best = linkage[i][j];
          best_i = i;
          best_j = j;
        }
      }
    }
    if (target_k < 0 && best > tau) break;
    members[best_i].insert(members[best_i].end(), members[best_j].begin(),
                           members[best_j].end());
    members[best_j].clear();
    active[best_j] = false;
    --active_count;
    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == best_i) continue;
      const double merged = std::max(linkage[best_i][x], linkage[best_j][x]);
      linkage[best_i][x] = merged;
      linkage[x][best_i] = merged;
    }
  }

  ClusteringResult result;
  result.labels.assign(n, 0);
  std::vector<std::size_t> raw_reps;
  int raw_k = 0;
  for (std::size_t slot = 0; slot < n; ++slot) {
    if (!active[slot]) continue;
    std::sort(members[slot].begin(), members[slot].end());
    for (std::size_t m : members[slot]) result.labels[m] = raw_k;
    raw_reps.push_back(medoid_of(
        members[slot], [&](std::size_t a, std::size_t b) { return distances.at(a, b); }));
    ++raw_k;
  }
  canonicalize(result, raw_k, raw_reps);
  std::ostringstream tag;
  tag << tag_prefix << "(k=" << result.k << ")";
  result.method_tag = tag.str();
  return result;
}

}  // namespace

ClusteringResult hierarchical(const DistanceMatrix& distances, double tau) {
  if (tau < 0.0) throw std::invalid_argument("hierarchical: tau must be >= 0");
  return agglomerate(distances, tau, -1, "hier");
}

ClusteringResult hierarchical_k(const DistanceMatrix& distances, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > distances.size())
    throw std::invalid_argument("hierarchical_k: k must lie in [1, n]");
  return agglomerate(distances, 0.0, k, "hier");
}

TypicalSelection typical_from_clusters(const SnapshotSeries& series,
                                       const ClusteringResult& result) {
  if (result.labels.size() != series.size())
    throw ValidationError("typical_from_clusters: labels do not cover the series");
  TypicalSelection sel;
  sel.typical_ids = result.representatives;
  std::sort(sel.typical_ids.begin(), sel.typical_ids.end());
  sel.assignment.resize(result.labels.size());
  for (std::size_t i = 0; i < result.labels.size(); ++i)
    sel.assignment[i] = result.representatives[result.labels[i]];
  sel.method_tag = result.method_tag;
  validate_selection(sel, series.size());
  return sel;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("adjusted_rand_index: labelings must align");
  const double n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> row_sums, col_sums;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1.0;
    row_sums[a[i]] += 1.0;
    col_sums[b[i]] += 1.0;
  }
  auto choose2 = [](double m) { return m * (m - 1.0) / 2.0; };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : cells) sum_cells += choose2(count);
  for (const auto& [key, count] : row_sums) sum_rows += choose2(count);
  for (const auto& [key, count] : col_sums) sum_cols += choose2(count);
  const double expected = sum_rows * sum_cols / choose2(n);
  const double max_index = (sum_rows + sum_cols) / 2.0;
  if (max_index == expected) return 1.0;  // both partitions degenerate
  return (sum_cells - expected) / (max_index - expected);
}

}  // namespace roadsnap

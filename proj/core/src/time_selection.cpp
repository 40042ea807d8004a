#include "roadsnap/time_selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace roadsnap {

void validate_selection(const TypicalSelection& selection, std::size_t n) {
  if (selection.typical_ids.empty()) throw ValidationError("selection has no typical snapshots");
  if (!std::is_sorted(selection.typical_ids.begin(), selection.typical_ids.end()))
    throw ValidationError("typical ids must be sorted");
  if (std::adjacent_find(selection.typical_ids.begin(), selection.typical_ids.end()) !=
      selection.typical_ids.end())
    throw ValidationError("typical ids must be unique");
  if (selection.typical_ids.back() >= n)
    throw ValidationError("typical id out of range");
  if (selection.assignment.size() != n)
    throw ValidationError("assignment must cover every snapshot");
  for (std::size_t id : selection.assignment) {
    if (!std::binary_search(selection.typical_ids.begin(), selection.typical_ids.end(), id))
      throw ValidationError("assignment references a non-typical snapshot");
  }
}

TypicalSelection uniform_sample(const SnapshotSeries& series, std::size_t step,
                                std::size_t offset) {
  if (step < 1) throw std::invalid_argument("uniform_sample: step must be >= 1");
  if (offset >= step) throw std::invalid_argument("uniform_sample: offset must be < step");
  const std::size_t n = series.size();
  if (offset >= n) throw std::invalid_argument("uniform_sample: offset beyond series end");

  TypicalSelection sel;
  for (std::size_t i = offset; i < n; i += step) sel.typical_ids.push_back(i);

  sel.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t t = series.at(i).timestamp_s;
    std::size_t best = sel.typical_ids[0];
    std::int64_t best_gap = std::numeric_limits<std::int64_t>::max();
    for (std::size_t id : sel.typical_ids) {
      const std::int64_t gap = std::abs(series.at(id).timestamp_s - t);
      if (gap < best_gap) {  // ties keep the earlier typical
        best_gap = gap;
        best = id;
      }
    }
    sel.assignment[i] = best;
  }

  std::ostringstream tag;
  tag << "time-uniform(step=" << step << ",offset=" << offset << ")";
  sel.method_tag = tag.str();
  return sel;
}

namespace {

// Pairwise error cache; errors within a window are reused as it grows.
class ErrorCache {
 public:
  ErrorCache(const RoadNetwork& network, const SnapshotSeries& series, const QuerySet& queries)
      : network_(network), series_(series), queries_(queries) {}

  // error(candidate j, ground truth i)
  double get(std::size_t j, std::size_t i) {
    const std::uint64_t key = (static_cast<std::uint64_t>(j) << 32) | i;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double err = snapshot_error(network_, series_.at(j), series_.at(i), queries_);
    cache_.emplace(key, err);
    return err;
  }

 private:
  const RoadNetwork& network_;
  const SnapshotSeries& series_;
  const QuerySet& queries_;
  std::unordered_map<std::uint64_t, double> cache_;
};

// Representative of window [begin, end): the member minimizing its maximum
// error against all other members, earliest member on ties.
std::size_t window_representative(ErrorCache& cache, std::size_t begin, std::size_t end,
                                  double* out_error) {
  std::size_t best = begin;
  double best_err = 0.0;
  if (end - begin == 1) {
    if (out_error) *out_error = 0.0;
    return begin;
  }
  best_err = std::numeric_limits<double>::infinity();
  for (std::size_t j = begin; j < end; ++j) {
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      if (i == j) continue;
      worst = std::max(worst, cache.get(j, i));
      if (worst >= best_err) break;  // cannot beat the incumbent
    }
    if (worst < best_err) {
      best_err = worst;
      best = j;
    }
  }
  if (out_error) *out_error = best_err;
  return best;
}

}  // namespace

TypicalSelection nonuniform_sample(const SnapshotSeries& series, double epsilon,
                                   const QuerySet& queries) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("nonuniform_sample: epsilon must be > 0");
  if (queries.paths.empty()) throw ValidationError("nonuniform_sample: empty query set");

  const std::size_t n = series.size();
  ErrorCache cache(series.network(), series, queries);

  TypicalSelection sel;
  sel.assignment.resize(n);

  auto finalize = [&](std::size_t begin, std::size_t end) {
    const std::size_t rep = window_representative(cache, begin, end, nullptr);
    sel.typical_ids.push_back(rep);
    for (std::size_t i = begin; i < end; ++i) sel.assignment[i] = rep;
  };

  std::size_t window_begin = 0;
  for (std::size_t i = 1; i < n; ++i) {
    double candidate_error = 0.0;
    window_representative(cache, window_begin, i + 1, &candidate_error);
    if (candidate_error > epsilon) {
      finalize(window_begin, i);
      window_begin = i;
    }
  }
  finalize(window_begin, n);

  std::sort(sel.typical_ids.begin(), sel.typical_ids.end());
  std::ostringstream tag;
  tag << "time-nonuniform(epsilon=" << epsilon << ")";
  sel.method_tag = tag.str();
  return sel;
}

}  // namespace roadsnap

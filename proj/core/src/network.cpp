#include "roadsnap/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "roadsnap/numeric.hpp"

namespace roadsnap {

RoadNetwork::RoadNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id != i) {
      std::ostringstream msg;
      msg << "vertex ids must be dense 0..|V|-1: position " << i << " holds id "
          << vertices_[i].id;
      throw ValidationError(msg.str());
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != i) {
      std::ostringstream msg;
      msg << "edge ids must be dense 0..|E|-1: position " << i << " holds id " << e.id;
      throw ValidationError(msg.str());
    }
    if (e.tail >= vertices_.size() || e.head >= vertices_.size()) {
      std::ostringstream msg;
      msg << "edge " << e.id << " references unknown vertex "
          << (e.tail >= vertices_.size() ? e.tail : e.head);
      throw ValidationError(msg.str());
    }
    if (!(e.length_m > 0.0) || !std::isfinite(e.length_m)) {
      std::ostringstream msg;
      msg << "edge " << e.id << " has non-positive length " << e.length_m;
      throw ValidationError(msg.str());
    }
  }

  const std::size_t nv = vertices_.size();
  out_offsets_.assign(nv + 1, 0);
  in_offsets_.assign(nv + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offsets_[e.tail + 1];
    ++in_offsets_[e.head + 1];
  }
  for (std::size_t v = 0; v < nv; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_edges_.resize(edges_.size());
  in_edges_.resize(edges_.size());
  std::vector<std::uint32_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::uint32_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
  for (const Edge& e : edges_) {
    out_edges_[out_pos[e.tail]++] = e.id;
    in_edges_[in_pos[e.head]++] = e.id;
  }
}

std::span<const EdgeId> RoadNetwork::out_edges(VertexId v) const {
  return {out_edges_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const EdgeId> RoadNetwork::in_edges(VertexId v) const {
  return {in_edges_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

RoadNetwork::BoundingBox RoadNetwork::bounding_box() const {
  BoundingBox box;
  if (vertices_.empty()) return box;
  box.x_min = box.x_max = vertices_[0].x;
  box.y_min = box.y_max = vertices_[0].y;
  for (const Vertex& v : vertices_) {
    box.x_min = std::min(box.x_min, v.x);
    box.x_max = std::max(box.x_max, v.x);
    box.y_min = std::min(box.y_min, v.y);
    box.y_max = std::max(box.y_max, v.y);
  }
  return box;
}

SnapshotSeries::SnapshotSeries(std::shared_ptr<const RoadNetwork> network,
                               std::vector<Snapshot> snapshots)
    : network_(std::move(network)), snapshots_(std::move(snapshots)) {
  if (!network_) throw ValidationError("snapshot series requires a network");
  if (snapshots_.empty()) throw ValidationError("snapshot series must hold at least one snapshot");
  std::sort(snapshots_.begin(), snapshots_.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.timestamp_s < b.timestamp_s; });
  const std::size_t ne = network_->num_edges();
  for (std::size_t i = 0; i < snapshots_.size(); ++i) {
    const Snapshot& s = snapshots_[i];
    if (s.weights.size() != ne) {
      std::ostringstream msg;
      msg << "snapshot at t=" << s.timestamp_s << " has " << s.weights.size()
          << " weights, expected " << ne;
      throw ValidationError(msg.str());
    }
    for (std::size_t e = 0; e < ne; ++e) {
      if (!(s.weights[e] > 0.0) || !std::isfinite(s.weights[e])) {
        std::ostringstream msg;
        msg << "snapshot at t=" << s.timestamp_s << " has non-positive weight for edge " << e;
        throw ValidationError(msg.str());
      }
    }
    if (i > 0 && snapshots_[i - 1].timestamp_s == s.timestamp_s) {
      std::ostringstream msg;
      msg << "duplicate snapshot timestamp " << s.timestamp_s;
      throw ValidationError(msg.str());
    }
  }
}

EdgeStats edge_stats(const SnapshotSeries& series) {
  const std::size_t ne = series.network().num_edges();
  const std::size_t n = series.size();
  EdgeStats stats;
  stats.mean.resize(ne);
  stats.stddev.resize(ne);
  stats.cv.resize(ne);
  std::vector<double> column(n);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t i = 0; i < n; ++i) column[i] = series.at(i).weights[e];
    const MeanStddev ms = population_stats(column);
    stats.mean[e] = ms.mean;
    stats.stddev[e] = ms.stddev;
    stats.cv[e] = ms.stddev == 0.0 ? 0.0 : ms.stddev / ms.mean;
  }
  return stats;
}

double cv_percentile(const EdgeStats& stats, double pct) {
  return percentile(stats.cv, pct);
}

std::uint64_t series_content_hash(const SnapshotSeries& series) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t bits) {
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(series.size());
  mix(series.network().num_edges());
  for (const Snapshot& s : series.snapshots()) {
    mix(static_cast<std::uint64_t>(s.timestamp_s));
    for (double w : s.weights) {
      std::uint64_t bits;
      std::memcpy(&bits, &w, sizeof(bits));
      mix(bits);
    }
  }
  return h;
}

}  // namespace roadsnap

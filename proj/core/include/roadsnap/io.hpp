#ifndef ROADSNAP_IO_HPP
#define ROADSNAP_IO_HPP

#include <memory>
#include <string>
#include <vector>

#include "roadsnap/edge_repr.hpp"
#include "roadsnap/error_metrics.hpp"
#include "roadsnap/network.hpp"
#include "roadsnap/time_selection.hpp"
#include "roadsnap/vertex_repr.hpp"

namespace roadsnap {

// Canonical CSV formats. All files are UTF-8 with '.' decimals and LF line
// endings; numbers are written in shortest round-trip form, so re-saving a
// loaded file reproduces it byte-for-byte.
//
//   network:   edge_id,tail,head,length_m
//   vertices:  vertex_id,x,y
//   series:    edge_id,timestamp_s,travel_time_s   (all |E| x n rows)
//   selection: snapshot_id,typical_id
//   clusters:  snapshot_id,cluster_id,typical_id
//   paths:     path_id,region,edge_id_sequence     (sequence ';'-joined)
//   vertices (typical): rank,vertex_id,fluctuation
//   feature matrix: snapshot_id,f0,f1,...
//   query paths: one ';'-free comma-separated edge-id list per line
//   od pairs:  source,target (no header)

RoadNetwork load_network(const std::string& edges_path, const std::string& vertices_path);
void save_network(const RoadNetwork& network, const std::string& edges_path,
                  const std::string& vertices_path);

SnapshotSeries load_series(std::shared_ptr<const RoadNetwork> network, const std::string& path);
void save_series(const SnapshotSeries& series, const std::string& path);

void save_selection(const TypicalSelection& selection, const std::string& path);
TypicalSelection load_selection(const std::string& path, std::size_t n);

void save_clusters(const std::vector<int>& labels, const std::vector<std::size_t>& assignment,
                   const std::string& path);

void save_path_set(const TypicalPathSet& set, const std::string& path);
TypicalPathSet load_path_set(const RoadNetwork& network, const std::string& path,
                             const PathSelectionParams& params);

void save_typical_vertices(const TypicalVertexSet& typical, const std::string& path);
TypicalVertexSet load_typical_vertices(const std::string& path);

void save_feature_matrix(const std::vector<FeatureVector>& vectors, const std::string& path);
std::vector<std::vector<double>> load_feature_matrix(const std::string& path);

void save_query_paths(const QuerySet& queries, const std::string& path);
QuerySet load_query_paths(const RoadNetwork& network, const std::string& path);

void save_od_pairs(const QuerySet& queries, const std::string& path);
std::vector<std::pair<VertexId, VertexId>> load_od_pairs(const RoadNetwork& network,
                                                         const std::string& path);

}  // namespace roadsnap

#endif  // ROADSNAP_IO_HPP

#include "roadsnap/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "roadsnap/csv.hpp"

namespace roadsnap {

namespace {

void expect_header(const std::vector<std::string>& lines, const std::string& expected,
                   const std::string& path) {
  if (lines.empty() || lines[0] != expected)
    throw ParseError(path + ":1: expected header '" + expected + "'");
}

std::vector<EdgeId> parse_edge_sequence(std::string_view field, const std::string& path,
                                        std::size_t line_no) {
  std::vector<EdgeId> edges;
  std::size_t start = 0;
  while (start <= field.size()) {
    std::size_t pos = field.find(';', start);
    if (pos == std::string_view::npos) pos = field.size();
    edges.push_back(parse_u32(field.substr(start, pos - start), path, line_no));
    start = pos + 1;
    if (pos == field.size()) break;
  }
  return edges;
}

std::string join_edge_sequence(const std::vector<EdgeId>& edges, char sep) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out.push_back(sep);
    out += std::to_string(edges[i]);
  }
  return out;
}

}  // namespace

RoadNetwork load_network(const std::string& edges_path, const std::string& vertices_path) {
  const auto vertex_lines = read_lines(vertices_path);
  expect_header(vertex_lines, "vertex_id,x,y", vertices_path);
  std::vector<Vertex> vertices;
  for (std::size_t i = 1; i < vertex_lines.size(); ++i) {
    if (vertex_lines[i].empty()) continue;
    const auto fields = split_csv(vertex_lines[i]);
    if (fields.size() != 3)
      throw ParseError(vertices_path + ":" + std::to_string(i + 1) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    Vertex v;
    v.id = parse_u32(fields[0], vertices_path, i + 1);
    v.x = parse_double(fields[1], vertices_path, i + 1);
    v.y = parse_double(fields[2], vertices_path, i + 1);
    vertices.push_back(v);
  }

  const auto edge_lines = read_lines(edges_path);
  expect_header(edge_lines, "edge_id,tail,head,length_m", edges_path);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < edge_lines.size(); ++i) {
    if (edge_lines[i].empty()) continue;
    const auto fields = split_csv(edge_lines[i]);
    if (fields.size() != 4)
      throw ParseError(edges_path + ":" + std::to_string(i + 1) + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    Edge e;
    e.id = parse_u32(fields[0], edges_path, i + 1);
    e.tail = parse_u32(fields[1], edges_path, i + 1);
    e.head = parse_u32(fields[2], edges_path, i + 1);
    e.length_m = parse_double(fields[3], edges_path, i + 1);
    edges.push_back(e);
  }

  return RoadNetwork(std::move(vertices), std::move(edges));
}

void save_network(const RoadNetwork& network, const std::string& edges_path,
                  const std::string& vertices_path) {
  std::string vtx = "vertex_id,x,y\n";
  for (const Vertex& v : network.vertices()) {
    vtx += std::to_string(v.id);
    vtx += ',';
    vtx += format_double(v.x);
    vtx += ',';
    vtx += format_double(v.y);
    vtx += '\n';
  }
  write_file(vertices_path, vtx);

  std::string edg = "edge_id,tail,head,length_m\n";
  for (const Edge& e : network.edges()) {
    edg += std::to_string(e.id);
    edg += ',';
    edg += std::to_string(e.tail);
    edg += ',';
    edg += std::to_string(e.head);
    edg += ',';
    edg += format_double(e.length_m);
    edg += '\n';
  }
  write_file(edges_path, edg);
}

SnapshotSeries load_series(std::shared_ptr<const RoadNetwork> network, const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "edge_id,timestamp_s,travel_time_s", path);
  const std::size_t ne = network->num_edges();

  std::map<std::int64_t, std::vector<double>> by_timestamp;
  std::map<std::int64_t, std::vector<char>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() != 3)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    const EdgeId edge = parse_u32(fields[0], path, i + 1);
    const std::int64_t ts = parse_int(fields[1], path, i + 1);
    const double weight = parse_double(fields[2], path, i + 1);
    if (edge >= ne) {
      std::ostringstream msg;
      msg << path << ":" << (i + 1) << ": edge " << edge << " not in network";
      throw ValidationError(msg.str());
    }
    if (!(weight > 0.0)) {
      std::ostringstream msg;
      msg << path << ":" << (i + 1) << ": non-positive travel time " << weight << " for edge "
          << edge << " at t=" << ts;
      throw ValidationError(msg.str());
    }
    auto [it, inserted] = by_timestamp.try_emplace(ts);
    if (inserted) {
      it->second.assign(ne, 0.0);
      seen[ts].assign(ne, 0);
    }
    if (seen[ts][edge]) {
      std::ostringstream msg;
      msg << path << ":" << (i + 1) << ": duplicate weight for edge " << edge << " at t=" << ts;
      throw ValidationError(msg.str());
    }
    it->second[edge] = weight;
    seen[ts][edge] = 1;
  }

  std::vector<Snapshot> snapshots;
  for (auto& [ts, weights] : by_timestamp) {
    const auto& mask = seen[ts];
    for (std::size_t e = 0; e < ne; ++e) {
      if (!mask[e]) {
        std::ostringstream msg;
        msg << path << ": missing weight for edge " << e << " at t=" << ts;
        throw ValidationError(msg.str());
      }
    }
    snapshots.push_back({ts, std::move(weights)});
  }
  return SnapshotSeries(std::move(network), std::move(snapshots));
}

void save_series(const SnapshotSeries& series, const std::string& path) {
  std::string out = "edge_id,timestamp_s,travel_time_s\n";
  for (const Snapshot& snap : series.snapshots()) {
    for (std::size_t e = 0; e < snap.weights.size(); ++e) {
      out += std::to_string(e);
      out += ',';
      out += std::to_string(snap.timestamp_s);
      out += ',';
      out += format_double(snap.weights[e]);
      out += '\n';
    }
  }
  write_file(path, out);
}

void save_selection(const TypicalSelection& selection, const std::string& path) {
  std::string out = "snapshot_id,typical_id\n";
  for (std::size_t i = 0; i < selection.assignment.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(selection.assignment[i]);
    out += '\n';
  }
  write_file(path, out);
}

TypicalSelection load_selection(const std::string& path, std::size_t n) {
  const auto lines = read_lines(path);
  expect_header(lines, "snapshot_id,typical_id", path);
  TypicalSelection sel;
  sel.assignment.assign(n, 0);
  std::vector<char> filled(n, 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected 2 fields");
    const auto snap = static_cast<std::size_t>(parse_u32(fields[0], path, i + 1));
    const auto typical = static_cast<std::size_t>(parse_u32(fields[1], path, i + 1));
    if (snap >= n || typical >= n)
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": snapshot id out of range");
    sel.assignment[snap] = typical;
    filled[snap] = 1;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!filled[i])
      throw ValidationError(path + ": snapshot " + std::to_string(i) + " has no assignment");
  sel.typical_ids = sel.assignment;
  std::sort(sel.typical_ids.begin(), sel.typical_ids.end());
  sel.typical_ids.erase(std::unique(sel.typical_ids.begin(), sel.typical_ids.end()),
                        sel.typical_ids.end());
  sel.method_tag = "loaded";
  validate_selection(sel, n);
  return sel;
}

void save_clusters(const std::vector<int>& labels, const std::vector<std::size_t>& assignment,
                   const std::string& path) {
  if (labels.size() != assignment.size())
    throw ValidationError("save_clusters: labels and assignment must align");
  std::string out = "snapshot_id,cluster_id,typical_id\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(labels[i]);
    out += ',';
    out += std::to_string(assignment[i]);
    out += '\n';
  }
  write_file(path, out);
}

void save_path_set(const TypicalPathSet& set, const std::string& path) {
  std::string out = "path_id,region,edge_id_sequence\n";
  for (std::size_t i = 0; i < set.paths.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(set.region_of[i]);
    out += ',';
    out += join_edge_sequence(set.paths[i].edges, ';');
    out += '\n';
  }
  write_file(path, out);
}

TypicalPathSet load_path_set(const RoadNetwork& network, const std::string& path,
                             const PathSelectionParams& params) {
  const auto lines = read_lines(path);
  expect_header(lines, "path_id,region,edge_id_sequence", path);
  TypicalPathSet set;
  set.params = params;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() != 3)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected 3 fields");
    Path p;
    p.edges = parse_edge_sequence(fields[2], path, i + 1);
    validate_path(network, p, /*require_no_repeats=*/true);
    set.paths.push_back(std::move(p));
    set.region_of.push_back(static_cast<int>(parse_u32(fields[1], path, i + 1)));
  }
  return set;
}

void save_typical_vertices(const TypicalVertexSet& typical, const std::string& path) {
  std::string out = "rank,vertex_id,fluctuation\n";
  for (std::size_t i = 0; i < typical.vertices.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(typical.vertices[i]);
    out += ',';
    out += format_double(typical.fluctuation[i]);
    out += '\n';
  }
  write_file(path, out);
}

TypicalVertexSet load_typical_vertices(const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "rank,vertex_id,fluctuation", path);
  TypicalVertexSet typical;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() != 3)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected 3 fields");
    typical.vertices.push_back(parse_u32(fields[1], path, i + 1));
    typical.fluctuation.push_back(parse_double(fields[2], path, i + 1));
  }
  return typical;
}

void save_feature_matrix(const std::vector<FeatureVector>& vectors, const std::string& path) {
  std::string out = "snapshot_id";
  const std::size_t dim = vectors.empty() ? 0 : vectors[0].dimension();
  for (std::size_t j = 0; j < dim; ++j) {
    out += ",f";
    out += std::to_string(j);
  }
  out += '\n';
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out += std::to_string(i);
    for (double v : vectors[i].values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<std::vector<double>> load_feature_matrix(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("snapshot_id", 0) != 0)
    throw ParseError(path + ":1: expected feature matrix header");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j)
      row.push_back(parse_double(fields[j], path, i + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_query_paths(const QuerySet& queries, const std::string& path) {
  std::string out;
  for (const Path& p : queries.paths) {
    out += join_edge_sequence(p.edges, ',');
    out += '\n';
  }
  write_file(path, out);
}

QuerySet load_query_paths(const RoadNetwork& network, const std::string& path) {
  const auto lines = read_lines(path);
  QuerySet qs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    Path p;
    for (std::string_view field : split_csv(lines[i]))
      p.edges.push_back(parse_u32(field, path, i + 1));
    validate_path(network, p);
    qs.paths.push_back(std::move(p));
  }
  if (qs.paths.empty()) throw ValidationError(path + ": query set holds no paths");
  return qs;
}

void save_od_pairs(const QuerySet& queries, const std::string& path) {
  std::string out;
  for (const auto& [s, t] : queries.od_pairs) {
    out += std::to_string(s);
    out += ',';
    out += std::to_string(t);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<std::pair<VertexId, VertexId>> load_od_pairs(const RoadNetwork& network,
                                                         const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected 'source,target'");
    const VertexId s = parse_u32(fields[0], path, i + 1);
    const VertexId t = parse_u32(fields[1], path, i + 1);
    if (!network.valid_vertex(s) || !network.valid_vertex(t))
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": vertex id out of range");
    pairs.emplace_back(s, t);
  }
  return pairs;
}

}  // namespace roadsnap

#include "lanegraph/io.hpp"

#include <fstream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorCode::kSchema, "schema error: " + msg);
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("parse error: ") + e.what());
  }
}

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  const auto it = obj.find(name);
  if (it == obj.end()) schema_error(where + " is missing field '" + name + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(where + " must be finite");
  return d;
}

std::uint32_t node_id(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    schema_error(where + " must be a non-negative integer id");
  }
  return static_cast<std::uint32_t>(v.get<std::uint64_t>());
}

void check_version(const json& doc, const char* kind) {
  const auto& v = field(doc, "schema_version", "document");
  if (!v.is_string() || v.get<std::string>() != kSchemaVersion) {
    schema_error("unsupported schema_version " + v.dump() + " (expected \"" +
                 std::string(kSchemaVersion) + "\")");
  }
  if (const auto it = doc.find("kind"); it != doc.end() && *it != kind) {
    schema_error("expected a '" + std::string(kind) + "' document, got " + it->dump());
  }
}

json extent_json(const std::optional<Extent>& e) {
  if (!e) return nullptr;
  return json::array({e->width, e->height});
}

std::optional<Extent> extent_from(const json& doc) {
  const auto it = doc.find("extent");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_array() || it->size() != 2) schema_error("extent must be [width, height] or null");
  const Extent e{number((*it)[0], "extent[0]"), number((*it)[1], "extent[1]")};
  if (!(e.width > 0.0 && e.height > 0.0)) schema_error("extent must be positive");
  return e;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema_error(where + " must be [x, y]");
  return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

std::vector<Point> points_from(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where + " must be an array of points");
  std::vector<Point> pts;
  for (std::size_t k = 0; k < v.size(); ++k) {
    pts.push_back(point_from(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return pts;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string graph_to_json(const LaneGraph& g) {
  json nodes = json::array();
  for (const Node& n : g.nodes()) {
    nodes.push_back({{"id", to_index(n.id)}, {"x", n.position.x}, {"y", n.position.y}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"src", to_index(e.src)}, {"dst", to_index(e.dst)}});
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", "graph"},
              {"extent", extent_json(g.extent())},
              {"root", g.root() ? json(to_index(*g.root())) : json(nullptr)},
              {"nodes", nodes},
              {"edges", edges}};
  return dump(doc);
}

LaneGraph graph_from_json(std::string_view text) {
  const json doc = parse(text);
  check_version(doc, "graph");

  std::vector<Node> nodes;
  std::set<std::uint32_t> seen;
  const auto& jn = field(doc, "nodes", "document");
  if (!jn.is_array()) schema_error("nodes must be an array");
  for (std::size_t k = 0; k < jn.size(); ++k) {
    const std::string where = "nodes[" + std::to_string(k) + "]";
    const auto id = node_id(field(jn[k], "id", where), where + ".id");
    if (!seen.insert(id).second) schema_error("duplicate node id " + std::to_string(id));
    nodes.push_back({NodeId{id},
                     {number(field(jn[k], "x", where), where + ".x"),
                      number(field(jn[k], "y", where), where + ".y")}});
  }

  std::vector<Edge> edges;
  const auto& je = field(doc, "edges", "document");
  if (!je.is_array()) schema_error("edges must be an array");
  for (std::size_t k = 0; k < je.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    edges.push_back({NodeId{node_id(field(je[k], "src", where), where + ".src")},
                     NodeId{node_id(field(je[k], "dst", where), where + ".dst")}});
  }

  std::optional<NodeId> root;
  if (const auto& jr = field(doc, "root", "document"); !jr.is_null()) {
    root = NodeId{node_id(jr, "root")};
  }

  LaneGraph g(std::move(nodes), std::move(edges), root, extent_from(doc));
  for (const Violation& v : validate(g)) {
    if (v.severity == Severity::kError) {
      throw Error(ErrorCode::kInvalidGraph, "validation failure: " + v.message);
    }
  }
  return g;
}

std::string paths_to_json(const PathsDocument& doc) {
  json paths = json::array();
  for (std::size_t k = 0; k < doc.paths.size(); ++k) {
    json ids = json::array();
    for (NodeId id : doc.paths[k].node_ids) ids.push_back(to_index(id));
    json pts = json::array();
    for (Point p : doc.points.at(k)) pts.push_back(point_json(p));
    paths.push_back({{"node_ids", ids}, {"points", pts}});
  }
  return dump({{"schema_version", kSchemaVersion},
               {"kind", "paths"},
               {"extent", extent_json(doc.extent)},
               {"paths", paths}});
}

PathsDocument paths_from_json(std::string_view text) {
  const json doc = parse(text);
  check_version(doc, "paths");
  PathsDocument out;
  out.extent = extent_from(doc);
  const auto& jp = field(doc, "paths", "document");
  if (!jp.is_array()) schema_error("paths must be an array");
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const std::string where = "paths[" + std::to_string(k) + "]";
    const auto& ids = field(jp[k], "node_ids", where);
    if (!ids.is_array()) schema_error(where + ".node_ids must be an array");
    NodePath path;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      path.node_ids.push_back(NodeId{node_id(ids[i], where + ".node_ids")});
    }
    auto pts = points_from(field(jp[k], "points", where), where + ".points");
    if (pts.size() != path.node_ids.size()) schema_error(where + ": points and node_ids differ in length");
    out.paths.push_back(std::move(path));
    out.points.push_back(std::move(pts));
  }
  return out;
}

std::string proposals_to_json(const ProposalDocument& doc) {
  json props = json::array();
  for (const auto& p : doc.proposals) {
    json pts = json::array();
    for (Point q : p.control_points) pts.push_back(point_json(q));
    props.push_back({{"likelihood", p.likelihood}, {"points", pts}});
  }
  return dump({{"schema_version", kSchemaVersion},
               {"kind", "proposals"},
               {"representation", to_string(doc.representation)},
               {"n_cp", doc.n_cp ? json(*doc.n_cp) : json(nullptr)},
               {"proposals", props}});
}

ProposalDocument proposals_from_json(std::string_view text) {
  const json doc = parse(text);
  check_version(doc, "proposals");
  ProposalDocument out;
  const auto& jr = field(doc, "representation", "document");
  if (!jr.is_string()) schema_error("representation must be a string");
  try {
    out.representation = parse_representation(jr.get<std::string>());
  } catch (const Error& e) {
    schema_error(e.what());
  }
  if (const auto& jn = field(doc, "n_cp", "document"); !jn.is_null()) {
    if (!jn.is_number_unsigned() || jn.get<std::uint64_t>() < 2) schema_error("n_cp must be an integer >= 2 or null");
    out.n_cp = static_cast<std::size_t>(jn.get<std::uint64_t>());
  } else if (out.representation == Representation::kBezier) {
    schema_error("bezier documents need an explicit n_cp");
  }

  const auto& jp = field(doc, "proposals", "document");
  if (!jp.is_array()) schema_error("proposals must be an array");
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const std::string where = "proposals[" + std::to_string(k) + "]";
    PathProposal p;
    p.likelihood = number(field(jp[k], "likelihood", where), where + ".likelihood");
    if (p.likelihood < 0.0 || p.likelihood > 1.0) schema_error(where + ".likelihood outside [0,1]");
    p.control_points = points_from(field(jp[k], "points", where), where + ".points");
    if (out.n_cp && p.control_points.size() != *out.n_cp) {
      schema_error(where + " has " + std::to_string(p.control_points.size()) +
                   " points, n_cp is " + std::to_string(*out.n_cp));
    }
    if (p.control_points.size() < 2) schema_error(where + " needs at least 2 points");
    for (std::size_t i = 0; i < p.control_points.size(); ++i) {
      const bool endpoint = i == 0 || i + 1 == p.control_points.size();
      if (out.representation == Representation::kBezier && !endpoint) continue;
      const Point q = p.control_points[i];
      if (q.x < 0.0 || q.x > 1.0 || q.y < 0.0 || q.y > 1.0) {
        schema_error(where + ".points[" + std::to_string(i) + "] outside the normalized [0,1] range");
      }
    }
    out.proposals.push_back(std::move(p));
  }
  return out;
}

std::string assignment_to_json(const Assignment& a, const CostMatrix& costs) {
  json pairs = json::array();
  for (const auto& [g, p] : a.pairs) pairs.push_back(json::array({g, p}));
  json matrix = json::array();
  for (std::size_t r = 0; r < costs.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < costs.cols(); ++c) row.push_back(costs(r, c));
    matrix.push_back(row);
  }
  return dump({{"schema_version", kSchemaVersion},
               {"kind", "assignment"},
               {"pairs", pairs},
               {"total_cost", a.total_cost},
               {"cost_matrix", matrix}});
}

static json report_body(const MetricReport& r) {
  json sda = json::object();
  for (const auto& [t, v] : r.sda) {
    std::ostringstream key;
    key << t;
    sda[key.str()] = v;
  }
  return {{"topo_precision", r.topo_precision},
          {"topo_recall", r.topo_recall},
          {"geo_precision", r.geo_precision},
          {"geo_recall", r.geo_recall},
          {"apls", r.apls},
          {"sda", sda},
          {"graph_iou", r.graph_iou},
          {"warnings", r.warnings}};
}

std::string report_to_json(const MetricReport& r) {
  json doc = {{"schema_version", kSchemaVersion}, {"kind", "metric_report"}};
  doc.update(report_body(r));
  return dump(doc);
}

std::string reports_to_json(const std::vector<NamedReport>& reports) {
  json samples = json::array();
  for (const auto& [name, report] : reports) {
    json entry = {{"name", name}};
    entry.update(report_body(report));
    samples.push_back(entry);
  }
  return dump({{"schema_version", kSchemaVersion}, {"kind", "metric_reports"}, {"samples", samples}});
}

std::string to_string(Representation r) {
  return r == Representation::kBezier ? "bezier" : "polyline";
}

Representation parse_representation(std::string_view text) {
  if (text == "polyline") return Representation::kPolyline;
  if (text == "bezier") return Representation::kBezier;
  throw Error(ErrorCode::kParse, "representation must be 'polyline' or 'bezier', got '" +
                                     std::string(text) + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string());
  }
}

}  // namespace lanegraph

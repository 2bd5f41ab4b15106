#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lanegraph/aggregation.hpp"
#include "lanegraph/decomposition.hpp"
#include "lanegraph/graph.hpp"
#include "lanegraph/matching.hpp"
#include "lanegraph/metrics.hpp"

namespace lanegraph {

inline constexpr std::string_view kSchemaVersion = "1.0";

/// Lane graph in pixel coordinates. Loading rejects documents whose graph
/// fails validate() with errors.
std::string graph_to_json(const LaneGraph& g);
LaneGraph graph_from_json(std::string_view text);

/// Decomposed node paths with their pixel polylines.
struct PathsDocument {
  std::optional<Extent> extent;
  std::vector<NodePath> paths;
  std::vector<std::vector<Point>> points;  // parallel to paths
};

std::string paths_to_json(const PathsDocument& doc);
PathsDocument paths_from_json(std::string_view text);

/// Proposals (or ground-truth paths, likelihood 1) in normalized
/// coordinates. n_cp is empty for variable-length polyline documents.
struct ProposalDocument {
  Representation representation = Representation::kPolyline;
  std::optional<std::size_t> n_cp;
  std::vector<PathProposal> proposals;
};

std::string proposals_to_json(const ProposalDocument& doc);
ProposalDocument proposals_from_json(std::string_view text);

std::string assignment_to_json(const Assignment& a, const CostMatrix& costs);
std::string report_to_json(const MetricReport& r);

struct NamedReport {
  std::string name;
  MetricReport report;
};
std::string reports_to_json(const std::vector<NamedReport>& reports);

std::string to_string(Representation r);
Representation parse_representation(std::string_view text);

/// Whole file as a string. Throws Error(kParse) if unreadable.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

inline LaneGraph load_graph(const std::filesystem::path& path) {
  return graph_from_json(read_file(path));
}
inline void save_graph(const std::filesystem::path& path, const LaneGraph& g) {
  write_file_atomic(path, graph_to_json(g));
}

}  // namespace lanegraph

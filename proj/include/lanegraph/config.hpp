#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "lanegraph/aggregation.hpp"
#include "lanegraph/decomposition.hpp"
#include "lanegraph/matching.hpp"
#include "lanegraph/metrics.hpp"
#include "lanegraph/path_repr.hpp"

namespace lanegraph {

/// Every tunable of the toolkit in one place.
struct ToolConfig {
  MatchWeights weights;
  AggregationConfig aggregation;
  int bezier_degree = kDefaultBezierDegree;
  std::size_t polyline_points = kDefaultPolylinePoints;
  std::size_t max_paths = kDefaultMaxPaths;
  MetricConfig metrics;
  std::uint64_t rng_seed = 0;
};

/// Sets one key from its textual value. Keys: alpha, beta, p_min, d_max,
/// n_cp_out, bezier_degree, polyline_points, max_paths, interp_dist,
/// match_dist, topo_radius, sda_thresholds (comma list), lane_halfwidth,
/// raster_extent (WxH), raster_origin (x,y), rng_seed.
/// Throws Error(kParse) for unknown keys or malformed values and
/// Error(kInvalidArgument) for out-of-domain values.
void apply_setting(ToolConfig& cfg, std::string_view key, std::string_view value);

/// Parses flat `key = value` lines; `#` starts a comment, blank lines and
/// `[section]` headers are ignored. Errors carry the line number.
ToolConfig parse_config(std::string_view text, ToolConfig base = {});

/// Checks cross-field domains (positive distances, weights, ...).
void validate(const ToolConfig& cfg);

/// "WxH" -> Extent. Throws Error(kParse).
Extent parse_extent(std::string_view text);

}  // namespace lanegraph

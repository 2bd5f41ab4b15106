#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lanegraph/graph.hpp"
#include "lanegraph/matching.hpp"
#include "lanegraph/path_repr.hpp"

namespace lanegraph {

/// Thresholding and merge parameters. p_min and d_max defaults are
/// working assumptions, not reference values.
struct AggregationConfig {
  double p_min = 0.5;                      // keep proposals with likelihood >= p_min
  double d_max = 10.0;                     // merge radius in pixels (inclusive)
  std::optional<std::size_t> n_cp_out;     // resample each path to this many points
};

enum class Representation { kPolyline, kBezier };

struct ScoredPath {
  double likelihood = 1.0;
  Polyline polyline;
};

struct AggregationResult {
  LaneGraph graph;
  std::vector<std::string> warnings;
};

/// Proposals with likelihood >= p_min, relative order kept.
std::vector<PathProposal> filter_paths(const std::vector<PathProposal>& props, double p_min);

/// Fuses paths (pixel coordinates) into one successor graph.
///
/// Paths are merged in descending likelihood (stable). The first path seeds a
/// chain; each later path maps every point to the nearest node that existed
/// before that path started merging if it lies within d_max, otherwise to a
/// fresh node. Consecutive images are joined by a directed edge; self-loops,
/// duplicates and cycle-closing edges are skipped (the latter with a
/// warning). Node ids follow creation order; the root is node 0.
///
/// Throws Error(kEmptyGraph) for an empty path list, Error(kInvalidArgument)
/// for a bad config.
AggregationResult aggregate(const std::vector<ScoredPath>& paths, const AggregationConfig& cfg,
                            Extent roi_extent);

/// filter -> decode representation -> denormalize to roi_extent -> aggregate.
/// Bezier proposals are sampled at cfg.n_cp_out points (default 20) in
/// normalized space; polyline proposals are resampled only if n_cp_out is
/// set, after denormalization.
AggregationResult proposals_to_graph(const std::vector<PathProposal>& props, Representation repr,
                                     const AggregationConfig& cfg, Extent roi_extent);

}  // namespace lanegraph

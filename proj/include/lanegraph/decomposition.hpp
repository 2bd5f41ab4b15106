#pragma once

#include <cstddef>
#include <vector>

#include "lanegraph/graph.hpp"
#include "lanegraph/path_repr.hpp"

namespace lanegraph {

inline constexpr std::size_t kDefaultMaxPaths = 256;

/// Root-to-terminal traversal, root first.
struct NodePath {
  std::vector<NodeId> node_ids;

  friend auto operator<=>(const NodePath&, const NodePath&) = default;
};

/// Every maximal root-to-terminal path of the root-reachable part of g, in
/// lexicographic order of node-id sequences.
///
/// Throws Error(kCycle) if g is not a DAG, Error(kPathBudget) if there are
/// more than max_paths traversals, Error(kInvalidGraph) if g is otherwise
/// invalid. An empty graph decomposes into no paths.
std::vector<NodePath> decompose(const LaneGraph& g, std::size_t max_paths = kDefaultMaxPaths);

/// Number of root-to-terminal paths, counted by dynamic programming over a
/// topological order (saturates at SIZE_MAX). Requires a DAG.
std::size_t count_paths(const LaneGraph& g);

/// Node positions along p. Throws for ids missing from g and for paths that
/// do not form a valid Polyline (fewer than two points, zero length).
Polyline path_to_polyline(const LaneGraph& g, const NodePath& p);

}  // namespace lanegraph

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanegraph/geometry.hpp"

namespace lanegraph {

enum class NodeId : std::uint32_t {};

constexpr std::uint32_t to_index(NodeId id) { return static_cast<std::uint32_t>(id); }

struct Node {
  NodeId id{};
  Point position;

  friend constexpr bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId src{};
  NodeId dst{};

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed lane graph rooted at the ego pose.
///
/// Construction never throws on invariant violations; it only canonicalizes
/// (nodes sorted by id, edges sorted by (src, dst), duplicates kept) so that
/// validate() can report every problem at once. A default-constructed graph
/// has no nodes and no root and is the canonical empty graph.
class LaneGraph {
 public:
  LaneGraph() = default;
  LaneGraph(std::vector<Node> nodes, std::vector<Edge> edges,
            std::optional<NodeId> root, std::optional<Extent> extent = std::nullopt);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<NodeId> root() const { return root_; }
  std::optional<Extent> extent() const { return extent_; }

  bool empty() const { return nodes_.empty() && edges_.empty(); }
  bool contains(NodeId id) const;

  /// Throws Error(kInvalidGraph) for unknown ids.
  Point position(NodeId id) const;

  /// Distinct successors in ascending id order. Throws for unknown ids.
  std::span<const NodeId> successors(NodeId id) const;

  /// Nodes reachable from the root (root included), ascending id order.
  /// Edges with a missing endpoint are not followed.
  std::vector<NodeId> reachable() const;

  friend bool operator==(const LaneGraph& a, const LaneGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.root_ == b.root_ &&
           a.extent_ == b.extent_;
  }

 private:
  // Position in nodes_ of the first node carrying `id`, or npos.
  std::size_t slot(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::optional<NodeId> root_;
  std::optional<Extent> extent_;
  std::vector<std::vector<NodeId>> succ_;  // parallel to nodes_
};

enum class Severity { kError, kWarning };

enum class ViolationKind {
  kDuplicateNode,
  kNonFinitePosition,
  kOutsideExtent,
  kMissingRoot,
  kSelfLoop,
  kDuplicateEdge,
  kDanglingEdge,
  kCycle,
  kUnreachable,
};

struct Violation {
  ViolationKind kind;
  Severity severity;
  std::string message;
};

/// Every invariant violation of g, errors first in a fixed check order.
/// Nodes unreachable from the root are reported with Severity::kWarning.
std::vector<Violation> validate(const LaneGraph& g);

/// True iff validate(g) reports no errors (warnings allowed).
bool is_valid(const LaneGraph& g);

std::vector<NodeId> successors(const LaneGraph& g, NodeId v);

/// Reachable nodes with out-degree 0, ascending.
std::vector<NodeId> terminal_nodes(const LaneGraph& g);

/// Reachable nodes with out-degree >= 2, ascending.
std::vector<NodeId> split_nodes(const LaneGraph& g);

/// Edges whose source is reachable from the root, in canonical order.
std::vector<Edge> reachable_edges(const LaneGraph& g);

/// True iff the root-reachable parts of a and b coincide up to node ids:
/// a bijection between reachable nodes with positions within `tol`
/// (per coordinate) that maps the edge sets onto each other and root to root.
bool geometrically_equal(const LaneGraph& a, const LaneGraph& b, double tol = 0.0);

std::string to_string(ViolationKind kind);

}  // namespace lanegraph

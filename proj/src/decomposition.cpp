#include "lanegraph/decomposition.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

void require_dag(const LaneGraph& g) {
  for (const Violation& v : validate(g)) {
    if (v.severity != Severity::kError) continue;
    if (v.kind == ViolationKind::kCycle) throw Error(ErrorCode::kCycle, "cycle detected: " + v.message);
    throw Error(ErrorCode::kInvalidGraph, v.message);
  }
}

// Memoized root-to-terminal path counts; cycle-free input assumed.
std::size_t count_from(const LaneGraph& g, NodeId v, std::map<NodeId, std::size_t>& memo) {
  if (auto it = memo.find(v); it != memo.end()) return it->second;
  const auto succ = g.successors(v);
  std::size_t total = succ.empty() ? 1 : 0;
  for (NodeId w : succ) {
    const std::size_t c = count_from(g, w, memo);
    total = (total > std::numeric_limits<std::size_t>::max() - c)
                ? std::numeric_limits<std::size_t>::max()
                : total + c;
  }
  memo.emplace(v, total);
  return total;
}

}  // namespace

std::size_t count_paths(const LaneGraph& g) {
  require_dag(g);
  if (!g.root()) return 0;
  std::map<NodeId, std::size_t> memo;
  return count_from(g, *g.root(), memo);
}

std::vector<NodePath> decompose(const LaneGraph& g, std::size_t max_paths) {
  const std::size_t total = count_paths(g);
  if (total > max_paths) {
    throw Error(ErrorCode::kPathBudget, "path budget exceeded: " + std::to_string(total) +
                                            " traversals > max_paths " +
                                            std::to_string(max_paths));
  }
  std::vector<NodePath> out;
  if (!g.root()) return out;
  out.reserve(total);

  // Iterative DFS; successors are ascending so output is lexicographic.
  struct Frame {
    NodeId node;
    std::size_t next = 0;
  };
  std::vector<Frame> stack{{*g.root()}};
  std::vector<NodeId> current{*g.root()};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto succ = g.successors(top.node);
    if (succ.empty()) {
      out.push_back({current});
    }
    if (top.next < succ.size()) {
      const NodeId w = succ[top.next++];
      stack.push_back({w});
      current.push_back(w);
    } else {
      stack.pop_back();
      current.pop_back();
    }
  }
  return out;
}

Polyline path_to_polyline(const LaneGraph& g, const NodePath& p) {
  std::vector<Point> pts;
  pts.reserve(p.node_ids.size());
  for (NodeId id : p.node_ids) pts.push_back(g.position(id));
  return Polyline(std::move(pts));
}

}  // namespace lanegraph

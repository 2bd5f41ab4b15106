#include "lanegraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

constexpr std::size_t kNpos = std::numeric_limits<std::size_t>::max();

std::string id_str(NodeId id) { return std::to_string(to_index(id)); }

}  // namespace

LaneGraph::LaneGraph(std::vector<Node> nodes, std::vector<Edge> edges,
                     std::optional<NodeId> root, std::optional<Extent> extent)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      root_(root),
      extent_(extent) {
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(edges_.begin(), edges_.end());

  succ_.resize(nodes_.size());
  for (const Edge& e : edges_) {
    const std::size_t s = slot(e.src);
    if (s == kNpos || slot(e.dst) == kNpos) continue;
    auto& out = succ_[s];
    if (out.empty() || out.back() != e.dst) out.push_back(e.dst);
  }
}

std::size_t LaneGraph::slot(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return kNpos;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool LaneGraph::contains(NodeId id) const { return slot(id) != kNpos; }

Point LaneGraph::position(NodeId id) const {
  const std::size_t s = slot(id);
  if (s == kNpos) throw Error(ErrorCode::kInvalidGraph, "unknown node id " + id_str(id));
  return nodes_[s].position;
}

std::span<const NodeId> LaneGraph::successors(NodeId id) const {
  const std::size_t s = slot(id);
  if (s == kNpos) throw Error(ErrorCode::kInvalidGraph, "unknown node id " + id_str(id));
  return succ_[s];
}

std::vector<NodeId> LaneGraph::reachable() const {
  std::vector<NodeId> out;
  if (!root_ || !contains(*root_)) return out;
  std::set<NodeId> seen{*root_};
  std::deque<NodeId> queue{*root_};
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : successors(v)) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  out.assign(seen.begin(), seen.end());
  return out;
}

std::vector<Violation> validate(const LaneGraph& g) {
  std::vector<Violation> errors;
  std::vector<Violation> warnings;
  auto error = [&](ViolationKind k, std::string msg) {
    errors.push_back({k, Severity::kError, std::move(msg)});
  };
  auto warn = [&](ViolationKind k, std::string msg) {
    warnings.push_back({k, Severity::kWarning, std::move(msg)});
  };

  const auto& nodes = g.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id &&
        (i < 2 || nodes[i - 2].id != nodes[i].id)) {
      error(ViolationKind::kDuplicateNode, "duplicate node id " + id_str(nodes[i].id));
    }
  }
  for (const Node& n : nodes) {
    if (!is_finite(n.position)) {
      error(ViolationKind::kNonFinitePosition,
            "non-finite position at node " + id_str(n.id));
    } else if (const auto ext = g.extent()) {
      const Point p = n.position;
      if (p.x < 0.0 || p.y < 0.0 || p.x > ext->width || p.y > ext->height) {
        warn(ViolationKind::kOutsideExtent, "node " + id_str(n.id) + " outside extent");
      }
    }
  }

  if (!g.empty()) {
    if (!g.root()) {
      error(ViolationKind::kMissingRoot, "root: graph has nodes but no root");
    } else if (!g.contains(*g.root())) {
      error(ViolationKind::kMissingRoot, "root: node " + id_str(*g.root()) + " does not exist");
    }
  }

  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    const std::string label = "(" + id_str(e.src) + "," + id_str(e.dst) + ")";
    if (e.src == e.dst) error(ViolationKind::kSelfLoop, "self-loop edge " + label);
    if (i > 0 && edges[i - 1] == e && (i < 2 || edges[i - 2] != e)) {
      error(ViolationKind::kDuplicateEdge, "duplicate edge " + label);
    }
    if (!g.contains(e.src) || !g.contains(e.dst)) {
      error(ViolationKind::kDanglingEdge, "dangling edge " + label);
    }
  }

  // Kahn's algorithm over well-formed, non-self-loop edges.
  std::map<NodeId, std::size_t> indegree;
  for (const Node& n : nodes) indegree.emplace(n.id, 0);
  for (const Node& n : nodes) {
    for (NodeId w : g.successors(n.id)) {
      if (w != n.id) ++indegree[w];
    }
  }
  std::deque<NodeId> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push_back(id);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    const NodeId v = ready.front();
    ready.pop_front();
    ++processed;
    for (NodeId w : g.successors(v)) {
      if (w != v && --indegree[w] == 0) ready.push_back(w);
    }
  }
  if (processed != indegree.size()) {
    std::ostringstream msg;
    msg << "cycle through nodes";
    for (const auto& [id, deg] : indegree) {
      if (deg > 0) msg << ' ' << to_index(id);
    }
    error(ViolationKind::kCycle, msg.str());
  }

  if (g.root() && g.contains(*g.root())) {
    const auto reach = g.reachable();
    for (const Node& n : nodes) {
      if (!std::binary_search(reach.begin(), reach.end(), n.id)) {
        warn(ViolationKind::kUnreachable, "node " + id_str(n.id) + " unreachable from root");
      }
    }
  }

  errors.insert(errors.end(), warnings.begin(), warnings.end());
  return errors;
}

bool is_valid(const LaneGraph& g) {
  const auto v = validate(g);
  return std::none_of(v.begin(), v.end(),
                      [](const Violation& x) { return x.severity == Severity::kError; });
}

std::vector<NodeId> successors(const LaneGraph& g, NodeId v) {
  const auto s = g.successors(v);
  return {s.begin(), s.end()};
}

std::vector<NodeId> terminal_nodes(const LaneGraph& g) {
  std::vector<NodeId> out;
  for (NodeId v : g.reachable()) {
    if (g.successors(v).empty()) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> split_nodes(const LaneGraph& g) {
  std::vector<NodeId> out;
  for (NodeId v : g.reachable()) {
    if (g.successors(v).size() >= 2) out.push_back(v);
  }
  return out;
}

std::vector<Edge> reachable_edges(const LaneGraph& g) {
  std::vector<Edge> out;
  for (NodeId v : g.reachable()) {
    for (NodeId w : g.successors(v)) out.push_back({v, w});
  }
  return out;
}

bool geometrically_equal(const LaneGraph& a, const LaneGraph& b, double tol) {
  const auto ra = a.reachable();
  const auto rb = b.reachable();
  if (ra.size() != rb.size()) return false;
  if (ra.empty()) return true;

  auto close = [tol](Point p, Point q) {
    return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
  };

  std::map<NodeId, NodeId> image;
  std::set<NodeId> used;
  for (NodeId v : ra) {
    const Point p = a.position(v);
    std::optional<NodeId> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId w : rb) {
      const Point q = b.position(w);
      if (!close(p, q)) continue;
      const double d = distance(p, q);
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    if (!best || !used.insert(*best).second) return false;
    image[v] = *best;
  }
  if (image.at(*a.root()) != *b.root()) return false;

  std::set<Edge> mapped;
  for (const Edge& e : reachable_edges(a)) mapped.insert({image.at(e.src), image.at(e.dst)});
  const auto eb = reachable_edges(b);
  return mapped == std::set<Edge>(eb.begin(), eb.end());
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDuplicateNode: return "duplicate node";
    case ViolationKind::kNonFinitePosition: return "non-finite position";
    case ViolationKind::kOutsideExtent: return "outside extent";
    case ViolationKind::kMissingRoot: return "root";
    case ViolationKind::kSelfLoop: return "self-loop";
    case ViolationKind::kDuplicateEdge: return "duplicate edge";
    case ViolationKind::kDanglingEdge: return "dangling edge";
    case ViolationKind::kCycle: return "cycle";
    case ViolationKind::kUnreachable: return "unreachable";
  }
  return "unknown";
}

}  // namespace lanegraph

#pragma once

#include <algorithm>
#include <deque>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lanegraph/graph.hpp"

namespace lanegraph::test {

inline NodeId id(std::uint32_t v) { return NodeId{v}; }

inline std::vector<NodeId> ids(std::initializer_list<std::uint32_t> vs) {
  std::vector<NodeId> out;
  for (auto v : vs) out.push_back(NodeId{v});
  return out;
}

/// Graph from (id, x, y) triples and (src, dst) pairs, root 0.
inline LaneGraph make_graph(std::initializer_list<std::tuple<std::uint32_t, double, double>> nodes,
                            std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> edges,
                            std::optional<std::uint32_t> root = 0u,
                            std::optional<Extent> extent = std::nullopt) {
  std::vector<Node> ns;
  for (const auto& [i, x, y] : nodes) ns.push_back({NodeId{i}, {x, y}});
  std::vector<Edge> es;
  for (const auto& [s, d] : edges) es.push_back({NodeId{s}, NodeId{d}});
  std::optional<NodeId> r;
  if (root) r = NodeId{*root};
  return LaneGraph(std::move(ns), std::move(es), r, extent);
}

inline LaneGraph chain3() {
  return make_graph({{0, 0, 0}, {1, 10, 0}, {2, 20, 0}}, {{0, 1}, {1, 2}});
}

inline LaneGraph diamond() {
  return make_graph({{0, 50, 100}, {1, 30, 60}, {2, 70, 60}, {3, 50, 20}},
                    {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

// ---- independent oracles ---------------------------------------------------

/// Reachable set by plain BFS over the raw edge list.
inline std::set<NodeId> bfs_reachable(const LaneGraph& g) {
  std::set<NodeId> seen;
  if (!g.root()) return seen;
  std::deque<NodeId> q{*g.root()};
  seen.insert(*g.root());
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop_front();
    for (const Edge& e : g.edges()) {
      if (e.src == v && seen.insert(e.dst).second) q.push_back(e.dst);
    }
  }
  return seen;
}

/// Out-degree from the raw edge list.
inline std::size_t raw_out_degree(const LaneGraph& g, NodeId v) {
  return static_cast<std::size_t>(
      std::count_if(g.edges().begin(), g.edges().end(), [v](const Edge& e) { return e.src == v; }));
}

/// Every root->sink path by recursive enumeration over the raw edge list.
inline void enumerate_paths(const LaneGraph& g, NodeId v, std::vector<NodeId>& cur,
                            std::set<std::vector<NodeId>>& out) {
  cur.push_back(v);
  bool sink = true;
  for (const Edge& e : g.edges()) {
    if (e.src == v) {
      sink = false;
      enumerate_paths(g, e.dst, cur, out);
    }
  }
  if (sink) out.insert(cur);
  cur.pop_back();
}

inline std::set<std::vector<NodeId>> all_paths(const LaneGraph& g) {
  std::set<std::vector<NodeId>> out;
  std::vector<NodeId> cur;
  if (g.root()) enumerate_paths(g, *g.root(), cur, out);
  return out;
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(LANEGRAPH_TEST_TMPDIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lanegraph::test

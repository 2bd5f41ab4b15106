#include "lanegraph/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lanegraph/error.hpp"

namespace lanegraph {

LaneGraph generate_synthetic(std::uint64_t seed, const SyntheticSpec& spec) {
  if (spec.n_splits < 0 || spec.n_splits > kMaxSyntheticSplits) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_splits must lie in [0," + std::to_string(kMaxSyntheticSplits) + "]");
  }
  if (spec.depth < 1 || spec.depth > kMaxSyntheticDepth) {
    throw Error(ErrorCode::kInvalidArgument,
                "depth must lie in [1," + std::to_string(kMaxSyntheticDepth) + "]");
  }
  if (!(spec.jitter >= 0.0) || !std::isfinite(spec.jitter)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter must be finite and >= 0");
  }
  if (!(spec.extent.width >= 16.0 && spec.extent.height >= 16.0)) {
    throw Error(ErrorCode::kInvalidArgument, "extent must be at least 16x16 px");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> bend(-0.2, 0.2);
  std::normal_distribution<double> noise(0.0, 1.0);

  const double w = spec.extent.width;
  const double h = spec.extent.height;
  const double margin = 0.05 * w;
  const int levels = spec.n_splits + 1;
  const double step_y = 0.9 * h / static_cast<double>(levels * spec.depth);
  const double leaf_slots = std::pow(2.0, spec.n_splits);
  const double slot_w = (w - 2.0 * margin) / leaf_slots;

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  auto add_node = [&](Point p) {
    const auto id = NodeId{static_cast<std::uint32_t>(nodes.size())};
    nodes.push_back({id, p});
    return id;
  };

  struct Branch {
    NodeId tail;
    Point anchor;  // jitter-free tail position
    int level;
    double slot_lo;  // leaf-slot range [slot_lo, slot_hi)
    double slot_hi;
  };
  const Point root_pos{w / 2.0, h};
  std::vector<Branch> frontier{{add_node(root_pos), root_pos, 0, 0.0, leaf_slots}};

  // Breadth-first so ids grow level by level.
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const Branch b = frontier[head];
    const double span = b.slot_hi - b.slot_lo;
    const double center = margin + slot_w * (b.slot_lo + b.slot_hi) / 2.0;
    const double target_x = b.level == 0 ? b.anchor.x : center + bend(rng) * slot_w * span / 2.0;

    NodeId tail = b.tail;
    Point anchor = b.anchor;
    const Point start = b.anchor;
    for (int k = 1; k <= spec.depth; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(spec.depth);
      anchor = Point{start.x + u * (target_x - start.x), start.y - k * step_y};
      Point jittered = anchor;
      if (spec.jitter > 0.0) {
        jittered = Point{anchor.x + spec.jitter * noise(rng), anchor.y + spec.jitter * noise(rng)};
      }
      jittered.x = std::clamp(jittered.x, 0.0, w);
      jittered.y = std::clamp(jittered.y, 0.0, h);
      const NodeId next = add_node(jittered);
      edges.push_back({tail, next});
      tail = next;
    }
    if (b.level < spec.n_splits) {
      const double mid = (b.slot_lo + b.slot_hi) / 2.0;
      frontier.push_back({tail, anchor, b.level + 1, b.slot_lo, mid});
      frontier.push_back({tail, anchor, b.level + 1, mid, b.slot_hi});
    }
  }
  return LaneGraph(std::move(nodes), std::move(edges), NodeId{0}, spec.extent);
}

}  // namespace lanegraph

#include "lanegraph/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

void require_config(const AggregationConfig& cfg) {
  if (!(cfg.p_min >= 0.0 && cfg.p_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "p_min must lie in [0,1]");
  }
  if (!(cfg.d_max >= 0.0) || !std::isfinite(cfg.d_max)) {
    throw Error(ErrorCode::kInvalidArgument, "d_max must be finite and >= 0");
  }
  if (cfg.n_cp_out && *cfg.n_cp_out < 2) {
    throw Error(ErrorCode::kInvalidArgument, "n_cp_out must be >= 2");
  }
}

// Mutable adjacency used while merging.
class GraphBuilder {
 public:
  std::size_t add_node(Point p) {
    positions_.push_back(p);
    out_.emplace_back();
    return positions_.size() - 1;
  }

  std::size_t size() const { return positions_.size(); }
  Point position(std::size_t v) const { return positions_[v]; }

  bool has_edge(std::size_t a, std::size_t b) const { return out_[a].contains(b); }

  bool reaches(std::size_t from, std::size_t to) const {
    std::vector<bool> seen(positions_.size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (std::size_t w : out_[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return false;
  }

  void add_edge(std::size_t a, std::size_t b) { out_[a].insert(b); }

  LaneGraph build(Extent extent) const {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < positions_.size(); ++v) {
      const auto id = NodeId{static_cast<std::uint32_t>(v)};
      nodes.push_back({id, positions_[v]});
      for (std::size_t w : out_[v]) edges.push_back({id, NodeId{static_cast<std::uint32_t>(w)}});
    }
    return LaneGraph(std::move(nodes), std::move(edges), NodeId{0}, extent);
  }

 private:
  std::vector<Point> positions_;
  std::vector<std::set<std::size_t>> out_;
};

std::string fmt_point(Point p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

}  // namespace

std::vector<PathProposal> filter_paths(const std::vector<PathProposal>& props, double p_min) {
  std::vector<PathProposal> out;
  std::copy_if(props.begin(), props.end(), std::back_inserter(out),
               [p_min](const PathProposal& p) { return p.likelihood >= p_min; });
  return out;
}

AggregationResult aggregate(const std::vector<ScoredPath>& paths, const AggregationConfig& cfg,
                            Extent roi_extent) {
  require_config(cfg);
  if (paths.empty()) throw Error(ErrorCode::kEmptyGraph, "no paths to aggregate");

  std::vector<std::size_t> order(paths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return paths[a].likelihood > paths[b].likelihood;
  });

  AggregationResult result;
  GraphBuilder graph;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& pts = paths[order[rank]].polyline.points();
    const std::size_t existing = graph.size();

    std::vector<std::size_t> image;
    image.reserve(pts.size());
    for (const Point& p : pts) {
      std::size_t best = existing;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < existing; ++v) {
        const double d = distance(p, graph.position(v));
        if (d < best_d) {
          best_d = d;
          best = v;
        }
      }
      image.push_back(best < existing && best_d <= cfg.d_max ? best : graph.add_node(p));
    }

    for (std::size_t i = 0; i + 1 < image.size(); ++i) {
      const std::size_t a = image[i];
      const std::size_t b = image[i + 1];
      if (a == b || graph.has_edge(a, b)) continue;
      if (graph.reaches(b, a)) {
        result.warnings.push_back("dropped cycle-closing edge " + fmt_point(graph.position(a)) +
                                  "->" + fmt_point(graph.position(b)));
        continue;
      }
      graph.add_edge(a, b);
    }
  }

  const Point bottom_center{roi_extent.width / 2.0, roi_extent.height};
  const double root_offset = distance(graph.position(0), bottom_center);
  if (root_offset > cfg.d_max) {
    result.warnings.push_back("root " + fmt_point(graph.position(0)) + " is " +
                              std::to_string(root_offset) + " px from bottom-center");
  }
  result.graph = graph.build(roi_extent);
  return result;
}

AggregationResult proposals_to_graph(const std::vector<PathProposal>& props, Representation repr,
                                     const AggregationConfig& cfg, Extent roi_extent) {
  require_config(cfg);
  const auto kept = filter_paths(props, cfg.p_min);
  auto denormalize = [&](std::vector<Point> pts) {
    for (Point& p : pts) p = Point{p.x * roi_extent.width, p.y * roi_extent.height};
    return pts;
  };

  std::vector<ScoredPath> paths;
  paths.reserve(kept.size());
  for (const auto& prop : kept) {
    if (repr == Representation::kBezier) {
      const BezierCurve curve(prop.control_points);
      const auto sampled = bezier_sample(curve, cfg.n_cp_out.value_or(kDefaultPolylinePoints));
      paths.push_back({prop.likelihood, Polyline(denormalize(sampled.points()))});
    } else {
      Polyline line(denormalize(prop.control_points));
      if (cfg.n_cp_out) line = resample_polyline(line, *cfg.n_cp_out);
      paths.push_back({prop.likelihood, std::move(line)});
    }
  }
  if (paths.empty()) {
    throw Error(ErrorCode::kEmptyGraph, "no proposal reaches p_min = " + std::to_string(cfg.p_min));
  }
  return aggregate(paths, cfg, roi_extent);
}

}  // namespace lanegraph

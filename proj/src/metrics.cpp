#include "lanegraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <tuple>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interpolated graph with forward adjacency between consecutive samples.
struct DenseGraph {
  std::vector<Point> points;
  std::vector<std::vector<std::pair<std::size_t, double>>> out;

  bool empty() const { return points.empty(); }
};

DenseGraph densify(const LaneGraph& g, double interp_dist, std::vector<SamplePoint>* samples) {
  DenseGraph dense;
  const auto reach = g.reachable();
  std::map<NodeId, std::size_t> index;
  auto push = [&](SamplePoint s) {
    dense.points.push_back(s.position);
    dense.out.emplace_back();
    if (samples) samples->push_back(s);
    return dense.points.size() - 1;
  };
  auto link = [&](std::size_t a, std::size_t b) {
    dense.out[a].emplace_back(b, distance(dense.points[a], dense.points[b]));
  };

  for (NodeId v : reach) index[v] = push({g.position(v), v, std::nullopt});
  for (const Edge& e : reachable_edges(g)) {
    const Point a = g.position(e.src);
    const Point b = g.position(e.dst);
    const double len = distance(a, b);
    const auto segments =
        std::max<long>(1, static_cast<long>(std::ceil(len / interp_dist)));
    std::size_t prev = index.at(e.src);
    for (long k = 1; k < segments; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(segments);
      const std::size_t cur = push({a + t * (b - a), std::nullopt, e});
      link(prev, cur);
      prev = cur;
    }
    link(prev, index.at(e.dst));
  }
  return dense;
}

// Single-source shortest forward distances, optionally cut off at `limit`.
std::vector<double> dijkstra(const DenseGraph& g, std::size_t source, double limit = kInf) {
  std::vector<double> dist(g.points.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const auto& [w, len] : g.out[v]) {
      const double nd = d + len;
      if (nd < dist[w] && nd <= limit) {
        dist[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  return dist;
}

PrecisionRecall counts_to_scores(std::size_t matched, std::size_t n_pred, std::size_t n_gt) {
  if (n_pred == 0 && n_gt == 0) return {1.0, 1.0};
  if (n_pred == 0) return {1.0, 0.0};
  if (n_gt == 0) return {0.0, 1.0};
  return {static_cast<double>(matched) / static_cast<double>(n_pred),
          static_cast<double>(matched) / static_cast<double>(n_gt)};
}

std::vector<Point> node_positions(const LaneGraph& g, const std::vector<NodeId>& ids) {
  std::vector<Point> out;
  out.reserve(ids.size());
  for (NodeId v : ids) out.push_back(g.position(v));
  return out;
}

// Mean per-pair APLS score of source pairs against the target graph.
// Returns nullopt when the source has no connected pair.
std::optional<double> apls_direction(const DenseGraph& src, const DenseGraph& dst,
                                     double match_dist) {
  std::vector<std::optional<std::size_t>> counterpart(src.points.size());
  for (std::size_t i = 0; i < src.points.size(); ++i) {
    double best = kInf;
    for (std::size_t j = 0; j < dst.points.size(); ++j) {
      const double d = distance(src.points[i], dst.points[j]);
      if (d <= match_dist && d < best) {
        best = d;
        counterpart[i] = j;
      }
    }
  }

  std::vector<std::vector<double>> dst_dist(dst.points.size());
  auto dst_from = [&](std::size_t j) -> const std::vector<double>& {
    if (dst_dist[j].empty()) dst_dist[j] = dijkstra(dst, j);
    return dst_dist[j];
  };

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < src.points.size(); ++a) {
    const auto from_a = dijkstra(src, a);
    for (std::size_t b = 0; b < src.points.size(); ++b) {
      const double len = from_a[b];
      if (b == a || !std::isfinite(len) || len <= 0.0) continue;
      ++pairs;
      if (!counterpart[a] || !counterpart[b]) continue;
      const double len_dst = dst_from(*counterpart[a])[*counterpart[b]];
      if (!std::isfinite(len_dst)) continue;
      total += 1.0 - std::min(1.0, std::abs(len - len_dst) / len);
    }
  }
  if (pairs == 0) return std::nullopt;
  return total / static_cast<double>(pairs);
}

Extent raster_extent_for(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg) {
  if (cfg.raster_extent) return *cfg.raster_extent;
  if (gt.extent()) return *gt.extent();
  if (pred.extent()) return *pred.extent();
  Extent e;
  for (const LaneGraph* g : {&pred, &gt}) {
    for (const Node& n : g->nodes()) {
      e.width = std::max(e.width, n.position.x - cfg.raster_origin.x + cfg.lane_halfwidth);
      e.height = std::max(e.height, n.position.y - cfg.raster_origin.y + cfg.lane_halfwidth);
    }
  }
  return Extent{std::ceil(e.width), std::ceil(e.height)};
}

double mask_iou(const RasterMask& a, const RasterMask& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t k = 0; k < a.pixels.size(); ++k) {
    inter += a.pixels[k] & b.pixels[k];
    uni += a.pixels[k] | b.pixels[k];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

void validate_config(const MetricConfig& cfg) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be finite and > 0");
    }
  };
  positive(cfg.interp_dist, "interp_dist");
  positive(cfg.match_dist, "match_dist");
  positive(cfg.topo_radius, "topo_radius");
  positive(cfg.lane_halfwidth, "lane_halfwidth");
  for (double t : cfg.sda_thresholds) positive(t, "sda threshold");
  if (!std::is_sorted(cfg.sda_thresholds.begin(), cfg.sda_thresholds.end())) {
    throw Error(ErrorCode::kInvalidArgument, "sda_thresholds must be sorted ascending");
  }
  if (cfg.raster_extent) {
    positive(cfg.raster_extent->width, "raster width");
    positive(cfg.raster_extent->height, "raster height");
  }
}

std::vector<SamplePoint> interpolate_graph(const LaneGraph& g, double interp_dist) {
  if (!(interp_dist > 0.0)) throw Error(ErrorCode::kInvalidArgument, "interp_dist must be > 0");
  std::vector<SamplePoint> samples;
  densify(g, interp_dist, &samples);
  return samples;
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_match(std::span<const Point> a,
                                                              std::span<const Point> b,
                                                              double radius) {
  struct Candidate {
    double d;
    Point lo, hi;
    std::size_t i, j;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = distance(a[i], b[j]);
      if (d <= radius) cands.push_back({d, std::min(a[i], b[j]), std::max(a[i], b[j]), i, j});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    // index min/max keeps coincident points symmetric under swapping a and b
    return std::make_tuple(x.d, x.lo, x.hi, std::min(x.i, x.j), std::max(x.i, x.j)) <
           std::make_tuple(y.d, y.lo, y.hi, std::min(y.i, y.j), std::max(y.i, y.j));
  });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    out.emplace_back(c.i, c.j);
  }
  return out;
}

PrecisionRecall geo_scores(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg) {
  const auto p = densify(pred, cfg.interp_dist, nullptr);
  const auto g = densify(gt, cfg.interp_dist, nullptr);
  const auto matches = greedy_match(p.points, g.points, cfg.match_dist);
  return counts_to_scores(matches.size(), p.points.size(), g.points.size());
}

PrecisionRecall topo_scores(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg) {
  const auto p = densify(pred, cfg.interp_dist, nullptr);
  const auto g = densify(gt, cfg.interp_dist, nullptr);
  if (p.empty() || g.empty()) return counts_to_scores(0, p.points.size(), g.points.size());

  auto neighbourhood = [&](const DenseGraph& dense, std::size_t seed) {
    const auto dist = dijkstra(dense, seed, cfg.topo_radius);
    std::vector<Point> local;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      if (dist[k] <= cfg.topo_radius) local.push_back(dense.points[k]);
    }
    return local;
  };

  double sum_precision = 0.0;
  double sum_recall = 0.0;
  for (const auto& [i, j] : greedy_match(p.points, g.points, cfg.match_dist)) {
    const auto local_p = neighbourhood(p, i);
    const auto local_g = neighbourhood(g, j);
    const auto local = greedy_match(local_p, local_g, cfg.match_dist);
    const auto pr = counts_to_scores(local.size(), local_p.size(), local_g.size());
    sum_precision += pr.precision;
    sum_recall += pr.recall;
  }
  return {sum_precision / static_cast<double>(p.points.size()),
          sum_recall / static_cast<double>(g.points.size())};
}

double apls(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg) {
  const auto p = densify(pred, cfg.interp_dist, nullptr);
  const auto g = densify(gt, cfg.interp_dist, nullptr);
  const auto gt_to_pred = apls_direction(g, p, cfg.match_dist);
  const auto pred_to_gt = apls_direction(p, g, cfg.match_dist);
  if (!gt_to_pred && !pred_to_gt) return 1.0;
  if (!gt_to_pred || !pred_to_gt) return 0.0;
  return 0.5 * (*gt_to_pred + *pred_to_gt);
}

double sda(const LaneGraph& pred, const LaneGraph& gt, double threshold) {
  const auto gt_splits = node_positions(gt, split_nodes(gt));
  if (gt_splits.empty()) return 1.0;
  const auto pred_splits = node_positions(pred, split_nodes(pred));
  const auto matches = greedy_match(pred_splits, gt_splits, threshold);
  return static_cast<double>(matches.size()) / static_cast<double>(gt_splits.size());
}

std::size_t RasterMask::count() const {
  return static_cast<std::size_t>(std::count(pixels.begin(), pixels.end(), std::uint8_t{1}));
}

RasterMask rasterize(const LaneGraph& g, Extent extent, Point origin, double lane_halfwidth) {
  RasterMask mask;
  mask.width = static_cast<std::size_t>(std::ceil(extent.width));
  mask.height = static_cast<std::size_t>(std::ceil(extent.height));
  mask.pixels.assign(mask.width * mask.height, 0);

  for (NodeId v : g.reachable()) {
    const Point p = g.position(v) - origin;
    if (p.x < 0.0 || p.y < 0.0 || p.x > extent.width || p.y > extent.height) mask.clipped = true;
  }

  auto clamp_index = [](double v, std::size_t size) -> std::size_t {
    if (v <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(v), size);
  };
  for (const Edge& e : reachable_edges(g)) {
    const Point a = g.position(e.src) - origin;
    const Point b = g.position(e.dst) - origin;
    const std::size_t i0 = clamp_index(std::floor(std::min(a.x, b.x) - lane_halfwidth), mask.width);
    const std::size_t i1 = clamp_index(std::ceil(std::max(a.x, b.x) + lane_halfwidth) + 1, mask.width);
    const std::size_t j0 = clamp_index(std::floor(std::min(a.y, b.y) - lane_halfwidth), mask.height);
    const std::size_t j1 = clamp_index(std::ceil(std::max(a.y, b.y) + lane_halfwidth) + 1, mask.height);
    for (std::size_t j = j0; j < j1; ++j) {
      for (std::size_t i = i0; i < i1; ++i) {
        const Point center{static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5};
        if (distance_to_segment(center, a, b) <= lane_halfwidth) {
          mask.pixels[j * mask.width + i] = 1;
        }
      }
    }
  }
  return mask;
}

double graph_iou(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg) {
  const Extent extent = raster_extent_for(pred, gt, cfg);
  return mask_iou(rasterize(pred, extent, cfg.raster_origin, cfg.lane_halfwidth),
                  rasterize(gt, extent, cfg.raster_origin, cfg.lane_halfwidth));
}

MetricReport evaluate(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg) {
  validate_config(cfg);
  for (const LaneGraph* g : {&pred, &gt}) {
    for (const Violation& v : validate(*g)) {
      if (v.severity == Severity::kError) {
        throw Error(ErrorCode::kInvalidGraph,
                    std::string(g == &pred ? "pred" : "gt") + " graph invalid: " + v.message);
      }
    }
  }

  MetricReport report;
  const auto topo = topo_scores(pred, gt, cfg);
  const auto geo = geo_scores(pred, gt, cfg);
  report.topo_precision = topo.precision;
  report.topo_recall = topo.recall;
  report.geo_precision = geo.precision;
  report.geo_recall = geo.recall;
  report.apls = apls(pred, gt, cfg);
  for (double t : cfg.sda_thresholds) report.sda[t] = sda(pred, gt, t);

  const Extent extent = raster_extent_for(pred, gt, cfg);
  const auto mask_pred = rasterize(pred, extent, cfg.raster_origin, cfg.lane_halfwidth);
  const auto mask_gt = rasterize(gt, extent, cfg.raster_origin, cfg.lane_halfwidth);
  report.graph_iou = mask_iou(mask_pred, mask_gt);
  if (mask_pred.clipped) report.warnings.push_back("pred graph has nodes outside the raster extent; clipped");
  if (mask_gt.clipped) report.warnings.push_back("gt graph has nodes outside the raster extent; clipped");
  return report;
}

}  // namespace lanegraph

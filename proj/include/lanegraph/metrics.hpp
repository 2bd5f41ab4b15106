#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lanegraph/graph.hpp"

namespace lanegraph {

/// Evaluation parameters in pixels. Only the SDA thresholds have reference
/// values (20 and 50); the remaining defaults are working assumptions.
struct MetricConfig {
  double interp_dist = 5.0;    // max spacing of dense edge samples
  double match_dist = 8.0;     // point match radius for GEO / TOPO / APLS
  double topo_radius = 50.0;   // forward graph distance of TOPO neighbourhoods
  std::vector<double> sda_thresholds{20.0, 50.0};
  double lane_halfwidth = 5.0; // raster dilation radius for Graph IoU
  std::optional<Extent> raster_extent;  // falls back to gt, then pred extent
  Point raster_origin{};                // top-left corner of the raster
};

/// Throws Error(kInvalidArgument) for non-positive or unsorted fields.
void validate_config(const MetricConfig& cfg);

struct MetricReport {
  double topo_precision = 0.0;
  double topo_recall = 0.0;
  double geo_precision = 0.0;
  double geo_recall = 0.0;
  double apls = 0.0;
  std::map<double, double> sda;  // threshold px -> score
  double graph_iou = 0.0;
  std::vector<std::string> warnings;
};

/// Dense sample on a graph: either a node (edge empty) or an interior point
/// of a reachable edge.
struct SamplePoint {
  Point position;
  std::optional<NodeId> node;
  std::optional<Edge> edge;
};

/// One sample per reachable node (ascending id), then ceil(len/d) - 1 evenly
/// spaced interior samples per reachable edge (canonical edge order).
std::vector<SamplePoint> interpolate_graph(const LaneGraph& g, double interp_dist);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Greedy one-to-one matching within `radius`, closest pair first. Ties are
/// broken by a key symmetric in (a, b), so swapping the inputs mirrors the
/// result. Returns (index in a, index in b) pairs in acceptance order.
std::vector<std::pair<std::size_t, std::size_t>> greedy_match(std::span<const Point> a,
                                                              std::span<const Point> b,
                                                              double radius);

PrecisionRecall geo_scores(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg);
PrecisionRecall topo_scores(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg);
double apls(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg);
double sda(const LaneGraph& pred, const LaneGraph& gt, double threshold);

/// Binary lane mask; pixel (i, j) covers origin + [i, i+1) x [j, j+1).
struct RasterMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0/1
  bool clipped = false;              // some reachable node lies outside
  std::size_t count() const;
};

/// A pixel is set iff its center is within lane_halfwidth of a reachable edge.
RasterMask rasterize(const LaneGraph& g, Extent extent, Point origin, double lane_halfwidth);

double graph_iou(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg);

MetricReport evaluate(const LaneGraph& pred, const LaneGraph& gt, const MetricConfig& cfg);

}  // namespace lanegraph

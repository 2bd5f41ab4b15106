// Python bindings. Points cross the boundary as (x, y) tuples, graphs as
// the LaneGraph class, reports as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "lanegraph/aggregation.hpp"
#include "lanegraph/decomposition.hpp"
#include "lanegraph/error.hpp"
#include "lanegraph/io.hpp"
#include "lanegraph/matching.hpp"
#include "lanegraph/metrics.hpp"
#include "lanegraph/path_repr.hpp"
#include "lanegraph/synthetic.hpp"

namespace py = pybind11;
using namespace lanegraph;

namespace {

using XY = std::pair<double, double>;

std::vector<Point> to_points(const std::vector<XY>& xs) {
  std::vector<Point> out;
  out.reserve(xs.size());
  for (const auto& [x, y] : xs) out.push_back({x, y});
  return out;
}

std::vector<XY> from_points(const std::vector<Point>& ps) {
  std::vector<XY> out;
  out.reserve(ps.size());
  for (const Point& p : ps) out.emplace_back(p.x, p.y);
  return out;
}

std::optional<Extent> to_extent(const std::optional<XY>& e) {
  if (!e) return std::nullopt;
  return Extent{e->first, e->second};
}

Parametrization to_param(const std::string& s) {
  if (s == "chord") return Parametrization::kChordLength;
  if (s == "uniform") return Parametrization::kUniform;
  throw Error(ErrorCode::kInvalidArgument, "parametrization must be 'chord' or 'uniform'");
}

LaneGraph make_graph(const std::vector<std::tuple<std::uint32_t, double, double>>& nodes,
                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                     std::optional<std::uint32_t> root, std::optional<XY> extent) {
  std::vector<Node> ns;
  for (const auto& [i, x, y] : nodes) ns.push_back({NodeId{i}, {x, y}});
  std::vector<Edge> es;
  for (const auto& [s, d] : edges) es.push_back({NodeId{s}, NodeId{d}});
  std::optional<NodeId> r;
  if (root) r = NodeId{*root};
  return LaneGraph(std::move(ns), std::move(es), r, to_extent(extent));
}

std::vector<PathProposal> to_proposals(const std::vector<std::pair<double, std::vector<XY>>>& ps) {
  std::vector<PathProposal> out;
  for (const auto& [l, pts] : ps) out.push_back({l, to_points(pts)});
  return out;
}

CostMatrix to_matrix(const std::vector<std::vector<double>>& rows) { return CostMatrix::from_rows(rows); }

py::dict assignment_dict(const Assignment& a) {
  py::dict d;
  d["pairs"] = a.pairs;
  d["total_cost"] = a.total_cost;
  return d;
}

py::dict report_dict(const MetricReport& r) {
  py::dict d;
  d["topo_precision"] = r.topo_precision;
  d["topo_recall"] = r.topo_recall;
  d["geo_precision"] = r.geo_precision;
  d["geo_recall"] = r.geo_recall;
  d["apls"] = r.apls;
  d["sda"] = r.sda;
  d["graph_iou"] = r.graph_iou;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lanegraph, m) {
  m.doc() = "Successor lane graph toolkit";

  static py::exception<Error> error(m, "LaneGraphError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<LaneGraph>(m, "LaneGraph")
      .def(py::init(&make_graph), py::arg("nodes"), py::arg("edges"), py::arg("root") = std::optional<std::uint32_t>{0},
           py::arg("extent") = std::nullopt)
      .def_property_readonly("nodes",
                             [](const LaneGraph& g) {
                               std::vector<std::tuple<std::uint32_t, double, double>> out;
                               for (const Node& n : g.nodes())
                                 out.emplace_back(static_cast<std::uint32_t>(n.id), n.position.x, n.position.y);
                               return out;
                             })
      .def_property_readonly("edges",
                             [](const LaneGraph& g) {
                               std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
                               for (const Edge& e : g.edges())
                                 out.emplace_back(static_cast<std::uint32_t>(e.src), static_cast<std::uint32_t>(e.dst));
                               return out;
                             })
      .def_property_readonly("root",
                             [](const LaneGraph& g) -> std::optional<std::uint32_t> {
                               if (!g.root()) return std::nullopt;
                               return static_cast<std::uint32_t>(*g.root());
                             })
      .def_property_readonly("extent",
                             [](const LaneGraph& g) -> std::optional<XY> {
                               if (!g.extent()) return std::nullopt;
                               return XY{g.extent()->width, g.extent()->height};
                             })
      .def("successors",
           [](const LaneGraph& g, std::uint32_t v) {
             std::vector<std::uint32_t> out;
             for (NodeId w : successors(g, NodeId{v})) out.push_back(static_cast<std::uint32_t>(w));
             return out;
           })
      .def("validate",
           [](const LaneGraph& g) {
             std::vector<std::tuple<std::string, std::string, std::string>> out;
             for (const auto& v : validate(g))
               out.emplace_back(to_string(v.kind), v.severity == Severity::kError ? "error" : "warning", v.message);
             return out;
           })
      .def("is_valid", [](const LaneGraph& g) { return is_valid(g); })
      .def("to_json", [](const LaneGraph& g) { return graph_to_json(g); })
      .def_static("from_json", [](const std::string& s) { return graph_from_json(s); })
      .def("__eq__", [](const LaneGraph& a, const LaneGraph& b) { return a == b; })
      .def("__len__", [](const LaneGraph& g) { return g.nodes().size(); });

  m.def("split_nodes", [](const LaneGraph& g) {
    std::vector<std::uint32_t> out;
    for (NodeId v : split_nodes(g)) out.push_back(static_cast<std::uint32_t>(v));
    return out;
  });
  m.def("geometrically_equal", &geometrically_equal, py::arg("a"), py::arg("b"), py::arg("tol") = 0.0);

  m.def(
      "decompose",
      [](const LaneGraph& g, std::size_t max_paths) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& p : decompose(g, max_paths)) {
          auto& ids = out.emplace_back();
          for (NodeId v : p.node_ids) ids.push_back(static_cast<std::uint32_t>(v));
        }
        return out;
      },
      py::arg("graph"), py::arg("max_paths") = kDefaultMaxPaths);
  m.def("count_paths", &count_paths);

  m.def("bernstein", &bernstein, py::arg("i"), py::arg("n"), py::arg("t"));
  m.def("bezier_eval", [](const std::vector<XY>& cps, double t) {
    const Point p = bezier_eval(BezierCurve(to_points(cps)), t);
    return XY{p.x, p.y};
  });
  m.def("bezier_sample", [](const std::vector<XY>& cps, std::size_t k) {
    return from_points(bezier_sample(BezierCurve(to_points(cps)), k).points());
  });
  m.def("resample_polyline", [](const std::vector<XY>& pts, std::size_t k) {
    return from_points(resample_polyline(Polyline(to_points(pts)), k).points());
  });
  m.def(
      "fit_bezier",
      [](const std::vector<XY>& pts, int degree, const std::string& param) {
        const auto fit = fit_bezier(Polyline(to_points(pts)), degree, to_param(param));
        return std::make_pair(from_points(fit.curve.control_points()), fit.rmse);
      },
      py::arg("points"), py::arg("degree") = kDefaultBezierDegree, py::arg("parametrization") = "chord");

  m.def("hungarian", [](const std::vector<std::vector<double>>& c) { return assignment_dict(hungarian(to_matrix(c))); });
  m.def("brute_force_assignment",
        [](const std::vector<std::vector<double>>& c) { return assignment_dict(brute_force_assignment(to_matrix(c))); });
  m.def(
      "set_loss",
      [](const std::vector<std::vector<XY>>& gts, const std::vector<std::pair<double, std::vector<XY>>>& props,
         double alpha, double beta) {
        std::vector<GroundTruthPath> g;
        for (const auto& pts : gts) g.push_back({to_points(pts)});
        const auto loss = set_loss(g, to_proposals(props), {alpha, beta});
        py::dict d;
        d["total"] = loss.total;
        d["regression"] = loss.regression;
        d["classification"] = loss.classification;
        d["assignment"] = assignment_dict(loss.assignment);
        return d;
      },
      py::arg("gts"), py::arg("proposals"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0);

  m.def(
      "aggregate",
      [](const std::vector<std::pair<double, std::vector<XY>>>& proposals, const std::string& representation,
         XY extent, double p_min, double d_max, std::optional<std::size_t> n_cp_out) {
        AggregationConfig cfg;
        cfg.p_min = p_min;
        cfg.d_max = d_max;
        cfg.n_cp_out = n_cp_out;
        auto r = proposals_to_graph(to_proposals(proposals), parse_representation(representation), cfg,
                                    Extent{extent.first, extent.second});
        return std::make_pair(std::move(r.graph), std::move(r.warnings));
      },
      py::arg("proposals"), py::arg("representation"), py::arg("extent"), py::arg("p_min") = 0.5,
      py::arg("d_max") = 10.0, py::arg("n_cp_out") = std::nullopt);

  m.def(
      "evaluate",
      [](const LaneGraph& pred, const LaneGraph& gt, double interp_dist, double match_dist, double topo_radius,
         std::vector<double> sda_thresholds, double lane_halfwidth, std::optional<XY> raster_extent) {
        MetricConfig cfg;
        cfg.interp_dist = interp_dist;
        cfg.match_dist = match_dist;
        cfg.topo_radius = topo_radius;
        cfg.sda_thresholds = std::move(sda_thresholds);
        cfg.lane_halfwidth = lane_halfwidth;
        cfg.raster_extent = to_extent(raster_extent);
        return report_dict(evaluate(pred, gt, cfg));
      },
      py::arg("pred"), py::arg("gt"), py::arg("interp_dist") = 5.0, py::arg("match_dist") = 8.0,
      py::arg("topo_radius") = 50.0, py::arg("sda_thresholds") = std::vector<double>{20.0, 50.0},
      py::arg("lane_halfwidth") = 5.0, py::arg("raster_extent") = std::nullopt);

  m.def(
      "generate_synthetic",
      [](std::uint64_t seed, int n_splits, int depth, double jitter, XY extent) {
        return generate_synthetic(seed, {n_splits, depth, jitter, {extent.first, extent.second}});
      },
      py::arg("seed"), py::arg("n_splits") = 1, py::arg("depth") = 3, py::arg("jitter") = 0.0,
      py::arg("extent") = XY{256.0, 256.0});

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return std::make_tuple(code, out.str(), err.str());
  });
}

// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance and
// sample size is pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lanegraph/aggregation.hpp"
#include "lanegraph/decomposition.hpp"
#include "lanegraph/io.hpp"
#include "lanegraph/matching.hpp"
#include "lanegraph/metrics.hpp"
#include "lanegraph/path_repr.hpp"
#include "lanegraph/synthetic.hpp"

using namespace lanegraph;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// ---- pinned parameters ----------------------------------------------------
constexpr int kAc1Trials = 1000;
constexpr std::size_t kAc1MaxRows = 7;
constexpr std::size_t kAc1MaxCols = 10;
constexpr double kAc1TimeLimitS = 5.0;
constexpr int kAc2Curves = 100;
constexpr std::size_t kAc2Samples = 20;
constexpr double kAc2RmseTol = 1e-6;
constexpr int kAc3MaxDegree = 16;
constexpr int kAc3Samples = 1000;
constexpr double kAc3Tol = 1e-12;
constexpr int kAc4Graphs = 200;
constexpr double kAc4MergeFraction = 0.49;  // d_max / min pairwise distance
constexpr double kAc5Delta = 1e-3;
constexpr int kAc6Graphs = 100;
constexpr int kAc7Seeds = 60;
constexpr double kAc7Tol = 1e-9;
const std::vector<double> kAc7Sigmas{0.0, 2.0, 5.0, 10.0};
constexpr double kAc10LimitS = 120.0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

// ---- AC1 -------------------------------------------------------------------
Outcome ac1_assignment() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> value(0, 20);
  const auto t0 = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < kAc1Trials; ++trial) {
    const std::size_t rows = 1 + rng() % kAc1MaxRows;
    const std::size_t cols = rows + rng() % (kAc1MaxCols - rows + 1);
    CostMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = value(rng);
    if (hungarian(m).total_cost != brute_force_assignment(m).total_cost) ++mismatches;
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d cost mismatches, %.3f s (limit %.1f s)", mismatches, kAc1Trials,
                elapsed, kAc1TimeLimitS);
  return {mismatches == 0 && elapsed < kAc1TimeLimitS, buf};
}

// ---- AC2 -------------------------------------------------------------------
Outcome ac2_bezier_round_trip() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int degrees[] = {1, 3, 10};
  double worst = 0.0;
  int endpoint_failures = 0;
  for (int k = 0; k < kAc2Curves; ++k) {
    const int d = degrees[k % 3];
    std::vector<Point> cps;
    for (int i = 0; i <= d; ++i) cps.push_back({u(rng), u(rng)});
    const BezierCurve c(cps);
    const auto fit = fit_bezier(bezier_sample(c, kAc2Samples), d, Parametrization::kUniform);
    const auto& got = fit.curve.control_points();
    double sq = 0.0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const Point e = got[i] - cps[i];
      sq += e.x * e.x + e.y * e.y;
    }
    worst = std::max(worst, std::sqrt(sq / static_cast<double>(cps.size())));
    if (!(got.front() == cps.front()) || !(got.back() == cps.back())) ++endpoint_failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst control-point RMSE %.3e (tol %.0e), %d inexact endpoints", worst,
                kAc2RmseTol, endpoint_failures);
  return {worst <= kAc2RmseTol && endpoint_failures == 0, buf};
}

// ---- AC3 -------------------------------------------------------------------
Outcome ac3_partition_of_unity() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < kAc3Samples; ++s) {
    const double t = s == 0 ? 0.0 : s == 1 ? 1.0 : u(rng);
    for (int n = 0; n <= kAc3MaxDegree; ++n) {
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) sum += bernstein(i, n, t);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |sum - 1| = %.3e (tol %.0e)", worst, kAc3Tol);
  return {worst <= kAc3Tol, buf};
}

// ---- AC4 -------------------------------------------------------------------
LaneGraph reachable_subgraph(const LaneGraph& g) {
  const auto reach = g.reachable();
  std::vector<Node> nodes;
  for (NodeId v : reach) nodes.push_back({v, g.position(v)});
  return LaneGraph(nodes, reachable_edges(g), g.root(), g.extent());
}

Outcome ac4_decompose_aggregate() {
  int failures = 0;
  for (int seed = 0; seed < kAc4Graphs; ++seed) {
    const SyntheticSpec spec{seed % 5, 1 + seed % 4, 0.5 * (seed % 3), {256, 256}};
    LaneGraph g = generate_synthetic(static_cast<std::uint64_t>(seed), spec);
    if (seed % 2 == 1) {  // add an unreachable pair of nodes
      std::vector<Node> nodes = g.nodes();
      std::vector<Edge> edges = g.edges();
      const auto n = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back({NodeId{n}, {3.0, 3.0}});
      nodes.push_back({NodeId{n + 1}, {9.0, 250.0}});
      edges.push_back({NodeId{n}, NodeId{n + 1}});
      g = LaneGraph(nodes, edges, g.root(), g.extent());
    }
    const LaneGraph expected = reachable_subgraph(g);
    double min_d = 1e300;
    for (std::size_t i = 0; i < expected.nodes().size(); ++i)
      for (std::size_t j = i + 1; j < expected.nodes().size(); ++j)
        min_d = std::min(min_d, distance(expected.nodes()[i].position, expected.nodes()[j].position));
    AggregationConfig cfg;
    cfg.p_min = 0.5;
    cfg.d_max = kAc4MergeFraction * min_d;
    std::vector<ScoredPath> paths;
    for (const auto& p : decompose(g)) paths.push_back({1.0, path_to_polyline(g, p)});
    const auto result = aggregate(paths, cfg, *g.extent());
    if (!geometrically_equal(result.graph, expected, 0.0)) ++failures;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d/%d graphs not reproduced exactly", failures, kAc4Graphs);
  return {failures == 0, buf};
}

// ---- AC5 -------------------------------------------------------------------
Outcome ac5_loss() {
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n_cp = 6;
  std::vector<GroundTruthPath> gts(3);
  for (auto& g : gts)
    for (std::size_t k = 0; k < n_cp; ++k) g.control_points.push_back({u(rng), u(rng)});
  // matched proposals interleaved with surplus ones
  std::vector<PathProposal> props;
  std::vector<bool> matched;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    std::vector<Point> junk;
    for (std::size_t k = 0; k < n_cp; ++k) junk.push_back({u(rng), u(rng)});
    props.push_back({0.0, junk});
    matched.push_back(false);
    props.push_back({1.0, gts[i].control_points});
    matched.push_back(true);
  }
  const MatchWeights w;
  const double base = set_loss(gts, props, w).total;

  int checked = 0, not_positive = 0;
  auto expect_positive = [&](const std::vector<GroundTruthPath>& g, const std::vector<PathProposal>& p) {
    ++checked;
    if (!(set_loss(g, p, w).total > 0.0)) ++not_positive;
  };
  for (std::size_t j = 0; j < props.size(); ++j) {
    auto p = props;
    p[j].likelihood = matched[j] ? 1.0 - kAc5Delta : kAc5Delta;
    expect_positive(gts, p);
    if (!matched[j]) continue;  // surplus geometry is not part of the loss
    for (std::size_t k = 0; k < n_cp; ++k) {
      for (int axis = 0; axis < 2; ++axis) {
        auto q = props;
        (axis == 0 ? q[j].control_points[k].x : q[j].control_points[k].y) += kAc5Delta;
        expect_positive(gts, q);
      }
    }
  }
  for (std::size_t i = 0; i < gts.size(); ++i) {
    for (std::size_t k = 0; k < n_cp; ++k) {
      auto g = gts;
      g[i].control_points[k].x -= kAc5Delta;
      expect_positive(g, props);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "perfect loss %.17g, %d/%d perturbations not strictly positive", base,
                not_positive, checked);
  return {base == 0.0 && not_positive == 0, buf};
}

// ---- AC6 -------------------------------------------------------------------
std::vector<double> all_scores(const MetricReport& r) {
  std::vector<double> v{r.topo_precision, r.topo_recall, r.geo_precision, r.geo_recall, r.apls, r.graph_iou};
  for (const auto& [t, s] : r.sda) v.push_back(s);
  return v;
}

Outcome ac6_identity_conventions() {
  const MetricConfig cfg;
  const LaneGraph empty;
  int identity_failures = 0, convention_failures = 0, range_failures = 0;
  for (int seed = 0; seed < kAc6Graphs; ++seed) {
    const SyntheticSpec spec{seed % 4, 2 + seed % 3, 1.0 * (seed % 3), {256, 256}};
    const auto g = generate_synthetic(static_cast<std::uint64_t>(seed), spec);
    for (double v : all_scores(evaluate(g, g, cfg)))
      if (v != 1.0) ++identity_failures;

    const bool gt_has_splits = !split_nodes(g).empty();
    const auto pe = evaluate(empty, g, cfg);
    if (pe.geo_precision != 1.0 || pe.geo_recall != 0.0 || pe.topo_precision != 1.0 || pe.topo_recall != 0.0 ||
        pe.apls != 0.0 || pe.graph_iou != 0.0)
      ++convention_failures;
    for (const auto& [t, s] : pe.sda)
      if (s != (gt_has_splits ? 0.0 : 1.0)) ++convention_failures;
    const auto ge = evaluate(g, empty, cfg);
    if (ge.geo_precision != 0.0 || ge.geo_recall != 1.0 || ge.apls != 0.0 || ge.graph_iou != 0.0)
      ++convention_failures;
    for (const auto& [t, s] : ge.sda)
      if (s != 1.0) ++convention_failures;

    const auto other = generate_synthetic(static_cast<std::uint64_t>(seed + 1000),
                                          {(seed + 1) % 4, 3, 6.0, {256, 256}});
    for (const auto& r : {evaluate(other, g, cfg), evaluate(g, other, cfg), pe, ge})
      for (double v : all_scores(r))
        if (!(v >= 0.0 && v <= 1.0)) ++range_failures;
  }
  for (double v : all_scores(evaluate(empty, empty, cfg)))
    if (v != 1.0) ++convention_failures;
  char buf[200];
  std::snprintf(buf, sizeof buf, "identity misses %d, convention misses %d, out-of-range %d over %d graphs",
                identity_failures, convention_failures, range_failures, kAc6Graphs);
  return {identity_failures == 0 && convention_failures == 0 && range_failures == 0, buf};
}

// ---- AC7 / AC8 -------------------------------------------------------------
// Shared jitter sweep: each seed draws one set of standard normal offsets,
// scaled by sigma, so the sweep compares the same noise at growing magnitude.
struct SweepSample {
  double sigma;
  MetricReport report;
};

std::vector<SweepSample> jitter_sweep() {
  std::vector<SweepSample> out;
  const MetricConfig cfg;
  for (int seed = 0; seed < kAc7Seeds; ++seed) {
    const auto gt = generate_synthetic(static_cast<std::uint64_t>(7000 + seed),
                                       {1 + seed % 3, 3 + seed % 2, 0.0, {256, 256}});
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<Point> noise;
    for (std::size_t i = 0; i < gt.nodes().size(); ++i) noise.push_back({z(rng), z(rng)});
    for (double sigma : kAc7Sigmas) {
      std::vector<Node> nodes;
      for (std::size_t i = 0; i < gt.nodes().size(); ++i)
        nodes.push_back({gt.nodes()[i].id, gt.nodes()[i].position + sigma * noise[i]});
      const LaneGraph pred(nodes, gt.edges(), gt.root(), gt.extent());
      out.push_back({sigma, evaluate(pred, gt, cfg)});
    }
  }
  return out;
}

Outcome ac7_monotonicity(const std::vector<SweepSample>& sweep) {
  std::string detail;
  bool pass = true;
  const char* names[] = {"geo_recall", "apls", "graph_iou"};
  for (int metric = 0; metric < 3; ++metric) {
    double prev = 2.0;
    detail += std::string(metric ? "; " : "") + names[metric] + ":";
    for (double sigma : kAc7Sigmas) {
      double sum = 0.0;
      int n = 0;
      for (const auto& s : sweep) {
        if (s.sigma != sigma) continue;
        sum += metric == 0 ? s.report.geo_recall : metric == 1 ? s.report.apls : s.report.graph_iou;
        ++n;
      }
      const double mean = sum / n;
      if (mean > prev + kAc7Tol) pass = false;
      prev = mean;
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.4f", mean);
      detail += buf;
    }
  }
  return {pass, detail + " (sigma 0,2,5,10; " + std::to_string(kAc7Seeds) + " seeds)"};
}

Outcome ac8_sda_ordering(const std::vector<SweepSample>& sweep) {
  int violations = 0, samples = 0;
  for (const auto& s : sweep) {
    ++samples;
    if (s.report.sda.at(50.0) < s.report.sda.at(20.0)) ++violations;
  }
  return {violations == 0, std::to_string(violations) + "/" + std::to_string(samples) +
                               " samples with SDA50 < SDA20"};
}

// ---- AC9 -------------------------------------------------------------------
std::vector<std::string> cli_pipeline(const fs::path& dir) {
  fs::create_directories(dir);
  auto p = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> steps{
      {"generate", "--seed", "99", "--spec", "n_splits=2,depth=3,jitter=1.5,extent=256x256", "--out", p("gt.json")},
      {"generate", "--seed", "100", "--spec", "n_splits=2,depth=3,jitter=4,extent=256x256", "--out", p("noisy.json")},
      {"decompose", "--graph", p("gt.json"), "--out", p("paths.json")},
      {"represent", "--paths", p("paths.json"), "--to", "bezier", "--out", p("bezier.json")},
      {"represent", "--paths", p("paths.json"), "--to", "polyline", "--out", p("poly.json")},
      {"match", "--gt", p("bezier.json"), "--pred", p("bezier.json"), "--out", p("match.json")},
      {"aggregate", "--pred", p("bezier.json"), "--extent", "256x256", "--out", p("agg.json")},
      {"aggregate", "--pred", p("poly.json"), "--extent", "256x256", "--d-max", "3", "--out", p("agg_poly.json")},
      {"eval", "--pred", p("noisy.json"), "--gt", p("gt.json"), "--out", p("report.json")},
      {"loss", "--gt", p("poly.json"), "--pred", p("poly.json")},
  };
  std::vector<std::string> outputs;
  for (const auto& args : steps) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    outputs.push_back(args[0] + " exit " + std::to_string(code) + "\n" + out.str() + err.str());
  }
  for (const char* f : {"gt.json", "noisy.json", "paths.json", "bezier.json", "poly.json", "match.json", "agg.json",
                        "agg_poly.json", "report.json"}) {
    outputs.push_back(fs::exists(dir / f) ? read_file(dir / f) : std::string("<missing>"));
  }
  return outputs;
}

Outcome ac9_determinism() {
  const fs::path base = LANEGRAPH_TEST_TMPDIR;
  fs::remove_all(base);
  const auto a = cli_pipeline(base / "run1");
  const auto b = cli_pipeline(base / "run2");
  std::size_t differing = 0, failed_steps = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) ++differing;
    if (a[i] == "<missing>" || a[i].find(" exit 0\n") == std::string::npos) {
      if (i < 10) ++failed_steps;
    }
  }
  return {differing == 0 && failed_steps == 0,
          std::to_string(differing) + "/" + std::to_string(a.size()) + " outputs differ, " +
              std::to_string(failed_steps) + " steps failed"};
}

// ---- AC10 ------------------------------------------------------------------
Outcome ac10_runtime(double acceptance_seconds) {
  const auto t0 = Clock::now();
  const std::string cmd = std::string("\"") + LANEGRAPH_UNIT_TEST_BINARY + "\" --minimal > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  const double unit_seconds = seconds_since(t0);
  const double total = unit_seconds + acceptance_seconds;
  char buf[200];
  std::snprintf(buf, sizeof buf, "unit %.2f s (exit %d) + acceptance %.2f s = %.2f s (limit %.0f s)",
                unit_seconds, rc, acceptance_seconds, total, kAc10LimitS);
  return {rc == 0 && total < kAc10LimitS, buf};
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  int failures = 0;
  auto report = [&](const char* id, const char* title, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %-5s %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
  };

  report("AC1", "assignment optimality", ac1_assignment);
  report("AC2", "bezier round trip", ac2_bezier_round_trip);
  report("AC3", "bernstein partition of unity", ac3_partition_of_unity);
  report("AC4", "decompose/aggregate inverse", ac4_decompose_aggregate);
  report("AC5", "loss sanity", ac5_loss);
  report("AC6", "metric identity and conventions", ac6_identity_conventions);
  std::vector<SweepSample> sweep;
  try {
    sweep = jitter_sweep();
  } catch (const std::exception& e) {
    std::printf("jitter sweep failed: %s\n", e.what());
  }
  report("AC7", "metric monotonicity under jitter", [&] { return ac7_monotonicity(sweep); });
  report("AC8", "SDA threshold ordering", [&] { return ac8_sda_ordering(sweep); });
  report("AC9", "CLI determinism", ac9_determinism);
  const double own = seconds_since(t0);
  report("AC10", "end-to-end runtime", [&] { return ac10_runtime(own); });
  return failures == 0 ? 0 : 1;
}

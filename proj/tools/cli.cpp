#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <thread>

#include "lanegraph/aggregation.hpp"
#include "lanegraph/config.hpp"
#include "lanegraph/decomposition.hpp"
#include "lanegraph/error.hpp"
#include "lanegraph/io.hpp"
#include "lanegraph/matching.hpp"
#include "lanegraph/metrics.hpp"
#include "lanegraph/path_repr.hpp"
#include "lanegraph/synthetic.hpp"

namespace lanegraph::cli {
namespace {

namespace fs = std::filesystem;

// Layered configuration: defaults < --config file < --set overrides.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> settings;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key = value config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", settings, "override one config key (key=value), repeatable");
  }

  ToolConfig resolve() const {
    ToolConfig cfg;
    if (!config_path.empty()) cfg = parse_config(read_file(config_path));
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kParse, "--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

const auto kExtentCheck = CLI::Validator(
    [](const std::string& s) -> std::string {
      try {
        parse_extent(s);
      } catch (const Error& e) {
        return e.what();
      }
      return {};
    },
    "WxH", "extent");

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<GroundTruthPath> as_ground_truth(const ProposalDocument& doc) {
  std::vector<GroundTruthPath> gts;
  for (const auto& p : doc.proposals) gts.push_back({p.control_points});
  return gts;
}

void require_fixed_ncp(const ProposalDocument& gt, const ProposalDocument& pred) {
  if (!gt.n_cp || !pred.n_cp) {
    throw Error(ErrorCode::kSizeMismatch, "matching needs documents with a fixed n_cp");
  }
  if (*gt.n_cp != *pred.n_cp) {
    throw Error(ErrorCode::kSizeMismatch, "n_cp differs: gt " + std::to_string(*gt.n_cp) +
                                              " vs pred " + std::to_string(*pred.n_cp));
  }
}

SyntheticSpec parse_synthetic_spec(const std::string& text) {
  SyntheticSpec spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "--spec item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n_splits") {
        spec.n_splits = std::stoi(value);
      } else if (key == "depth") {
        spec.depth = std::stoi(value);
      } else if (key == "jitter") {
        spec.jitter = std::stod(value);
      } else if (key == "extent") {
        spec.extent = parse_extent(value);
      } else {
        throw Error(ErrorCode::kParse, "unknown --spec key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParse, "invalid --spec value '" + value + "' for " + key);
    }
  }
  return spec;
}

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Successor lane graph toolkit: decomposition, path representations, set matching, "
               "aggregation and graph metrics."};
  app.name("lanegraph");
  app.require_subcommand(1);

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "split a graph into maximal root-to-terminal paths");
  CommonOptions decompose_common;
  decompose_common.attach(decompose_cmd);
  std::string graph_path, out_path;
  std::size_t max_paths_flag = 0;
  decompose_cmd->add_option("--graph", graph_path, "graph document")->required()->check(CLI::ExistingFile);
  decompose_cmd->add_option("--out", out_path, "paths document to write")->required();
  auto* max_paths_opt = decompose_cmd->add_option("--max-paths", max_paths_flag, "path budget")
                            ->check(CLI::PositiveNumber);

  // represent
  auto* represent_cmd = app.add_subcommand("represent", "turn node paths into normalized polylines or Bezier curves");
  CommonOptions represent_common;
  represent_common.attach(represent_cmd);
  std::string paths_path, to_repr, extent_text, param_text = "chord";
  std::size_t n_cp_flag = 0;
  int degree_flag = 0;
  represent_cmd->add_option("--paths", paths_path, "paths document")->required()->check(CLI::ExistingFile);
  represent_cmd->add_option("--to", to_repr, "target representation")
      ->required()
      ->check(CLI::IsMember({"polyline", "bezier"}));
  auto* n_cp_opt = represent_cmd->add_option("--n-cp", n_cp_flag,
                                             "points per polyline (0 keeps graph vertices); "
                                             "for bezier, resampled fit input size");
  auto* degree_opt = represent_cmd->add_option("--degree", degree_flag, "Bezier degree")->check(CLI::PositiveNumber);
  represent_cmd->add_option("--extent", extent_text, "normalization extent WxH (default: document extent)")
      ->check(kExtentCheck);
  represent_cmd->add_option("--parametrization", param_text, "Bezier fit parameter assignment")
      ->check(CLI::IsMember({"chord", "uniform"}));
  represent_cmd->add_option("--out", out_path, "proposal document to write")->required();

  // match / loss
  auto* match_cmd = app.add_subcommand("match", "optimal assignment of ground-truth paths to proposals");
  auto* loss_cmd = app.add_subcommand("loss", "matched set loss (total, regression, classification)");
  CommonOptions match_common, loss_common;
  match_common.attach(match_cmd);
  loss_common.attach(loss_cmd);
  std::string gt_path, pred_path;
  double alpha_flag = 0.0, beta_flag = 0.0;
  CLI::Option* alpha_opts[2];
  CLI::Option* beta_opts[2];
  int slot = 0;
  for (auto* cmd : {match_cmd, loss_cmd}) {
    cmd->add_option("--gt", gt_path, "ground-truth proposal document")->required()->check(CLI::ExistingFile);
    cmd->add_option("--pred", pred_path, "predicted proposal document")->required()->check(CLI::ExistingFile);
    alpha_opts[slot] = cmd->add_option("--alpha", alpha_flag, "control-point weight");
    beta_opts[slot] = cmd->add_option("--beta", beta_flag, "likelihood weight");
    ++slot;
  }
  match_cmd->add_option("--out", out_path, "assignment document to write")->required();

  // aggregate
  auto* aggregate_cmd = app.add_subcommand("aggregate", "fuse thresholded proposals into one successor graph");
  CommonOptions aggregate_common;
  aggregate_common.attach(aggregate_cmd);
  double p_min_flag = 0.0, d_max_flag = 0.0;
  std::size_t n_cp_out_flag = 0;
  aggregate_cmd->add_option("--pred", pred_path, "proposal document")->required()->check(CLI::ExistingFile);
  auto* p_min_opt = aggregate_cmd->add_option("--p-min", p_min_flag, "likelihood threshold")->check(CLI::Range(0.0, 1.0));
  auto* d_max_opt = aggregate_cmd->add_option("--d-max", d_max_flag, "merge radius in px")->check(CLI::NonNegativeNumber);
  auto* n_cp_out_opt = aggregate_cmd->add_option("--n-cp-out", n_cp_out_flag, "resample paths to this many points");
  aggregate_cmd->add_option("--extent", extent_text, "RoI extent WxH")->required()->check(kExtentCheck);
  aggregate_cmd->add_option("--out", out_path, "graph document to write")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "score a predicted graph against ground truth");
  CommonOptions eval_common;
  eval_common.attach(eval_cmd);
  unsigned jobs = 0;
  eval_cmd->add_option("--pred", pred_path, "predicted graph document or directory")->required()->check(CLI::ExistingPath);
  eval_cmd->add_option("--gt", gt_path, "ground-truth graph document or directory")->required()->check(CLI::ExistingPath);
  eval_cmd->add_option("--jobs", jobs, "parallel samples in directory mode (0 = hardware)");
  eval_cmd->add_option("--out", out_path, "report document to write")->required();

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "write a seeded synthetic successor graph");
  CommonOptions generate_common;
  generate_common.attach(generate_cmd);
  std::uint64_t seed_flag = 0;
  std::string spec_text;
  auto* seed_opt = generate_cmd->add_option("--seed", seed_flag, "random seed");
  generate_cmd->add_option("--spec", spec_text, "n_splits=..,depth=..,jitter=..,extent=WxH");
  generate_cmd->add_option("--out", out_path, "graph document to write")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (decompose_cmd->parsed()) {
      ToolConfig cfg = decompose_common.resolve();
      if (max_paths_opt->count()) cfg.max_paths = max_paths_flag;
      validate(cfg);
      const LaneGraph g = load_graph(graph_path);
      PathsDocument doc;
      doc.extent = g.extent();
      doc.paths = decompose(g, cfg.max_paths);
      for (const auto& p : doc.paths) {
        std::vector<Point> pts;
        for (NodeId id : p.node_ids) pts.push_back(g.position(id));
        doc.points.push_back(std::move(pts));
      }
      write_file_atomic(out_path, paths_to_json(doc));
    } else if (represent_cmd->parsed()) {
      ToolConfig cfg = represent_common.resolve();
      if (degree_opt->count()) cfg.bezier_degree = degree_flag;
      validate(cfg);
      const PathsDocument paths = paths_from_json(read_file(paths_path));
      std::optional<Extent> extent = paths.extent;
      if (!extent_text.empty()) extent = parse_extent(extent_text);
      if (!extent) throw Error(ErrorCode::kSchema, "paths document has no extent; pass --extent");

      auto normalize = [&](std::vector<Point> pts) {
        for (Point& q : pts) q = Point{q.x / extent->width, q.y / extent->height};
        return pts;
      };
      ProposalDocument doc;
      doc.representation = parse_representation(to_repr);
      const std::size_t n_points = n_cp_opt->count() ? n_cp_flag : cfg.polyline_points;
      for (const auto& pts : paths.points) {
        const Polyline line(pts);
        if (doc.representation == Representation::kPolyline) {
          if (n_points == 0) {
            doc.proposals.push_back({1.0, normalize(line.points())});
          } else {
            doc.proposals.push_back({1.0, normalize(resample_polyline(line, n_points).points())});
          }
        } else {
          const auto fit_points = std::max<std::size_t>(n_points, static_cast<std::size_t>(cfg.bezier_degree) + 1);
          const auto param = param_text == "uniform" ? Parametrization::kUniform : Parametrization::kChordLength;
          const auto fit = fit_bezier(resample_polyline(line, fit_points), cfg.bezier_degree, param);
          doc.proposals.push_back({1.0, normalize(fit.curve.control_points())});
        }
      }
      if (doc.representation == Representation::kBezier) {
        doc.n_cp = static_cast<std::size_t>(cfg.bezier_degree) + 1;
      } else if (n_points != 0) {
        doc.n_cp = n_points;
      }
      write_file_atomic(out_path, proposals_to_json(doc));
    } else if (match_cmd->parsed() || loss_cmd->parsed()) {
      const bool is_match = match_cmd->parsed();
      ToolConfig cfg = (is_match ? match_common : loss_common).resolve();
      const int k = is_match ? 0 : 1;
      if (alpha_opts[k]->count()) cfg.weights.alpha = alpha_flag;
      if (beta_opts[k]->count()) cfg.weights.beta = beta_flag;
      validate(cfg);
      const auto gt_doc = proposals_from_json(read_file(gt_path));
      const auto pred_doc = proposals_from_json(read_file(pred_path));
      require_fixed_ncp(gt_doc, pred_doc);
      const auto gts = as_ground_truth(gt_doc);
      if (is_match) {
        const auto costs = build_cost_matrix(gts, pred_doc.proposals, cfg.weights);
        write_file_atomic(out_path, assignment_to_json(hungarian(costs), costs));
      } else {
        const auto loss = set_loss(gts, pred_doc.proposals, cfg.weights);
        out << "total=" << format_double(loss.total) << '\n'
            << "regression=" << format_double(loss.regression) << '\n'
            << "classification=" << format_double(loss.classification) << '\n';
      }
    } else if (aggregate_cmd->parsed()) {
      ToolConfig cfg = aggregate_common.resolve();
      if (p_min_opt->count()) cfg.aggregation.p_min = p_min_flag;
      if (d_max_opt->count()) cfg.aggregation.d_max = d_max_flag;
      if (n_cp_out_opt->count()) {
        if (n_cp_out_flag == 0) {
          cfg.aggregation.n_cp_out.reset();
        } else {
          cfg.aggregation.n_cp_out = n_cp_out_flag;
        }
      }
      validate(cfg);
      const auto doc = proposals_from_json(read_file(pred_path));
      const auto result = proposals_to_graph(doc.proposals, doc.representation, cfg.aggregation,
                                             parse_extent(extent_text));
      for (const auto& w : result.warnings) err << "warning: " << w << '\n';
      save_graph(out_path, result.graph);
    } else if (eval_cmd->parsed()) {
      ToolConfig cfg = eval_common.resolve();
      validate(cfg);
      if (fs::is_directory(pred_path) != fs::is_directory(gt_path)) {
        throw Error(ErrorCode::kSchema, "--pred and --gt must both be files or both be directories");
      }
      if (!fs::is_directory(pred_path)) {
        const auto report = evaluate(load_graph(pred_path), load_graph(gt_path), cfg.metrics);
        for (const auto& w : report.warnings) err << "warning: " << w << '\n';
        write_file_atomic(out_path, report_to_json(report));
      } else {
        const auto files = json_files(pred_path);
        for (const auto& f : files) {
          if (!fs::exists(fs::path(gt_path) / f.filename())) {
            throw Error(ErrorCode::kIo, "no ground truth for sample " + f.filename().string());
          }
        }
        const unsigned width = jobs != 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());
        std::vector<NamedReport> reports(files.size());
        for (std::size_t begin = 0; begin < files.size(); begin += width) {
          std::vector<std::future<MetricReport>> batch;
          const std::size_t end = std::min(files.size(), begin + width);
          for (std::size_t i = begin; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
              return evaluate(load_graph(files[i]), load_graph(fs::path(gt_path) / files[i].filename()),
                              cfg.metrics);
            }));
          }
          for (std::size_t i = begin; i < end; ++i) {
            reports[i] = {files[i].filename().string(), batch[i - begin].get()};
          }
        }
        write_file_atomic(out_path, reports_to_json(reports));
      }
    } else if (generate_cmd->parsed()) {
      ToolConfig cfg = generate_common.resolve();
      if (seed_opt->count()) cfg.rng_seed = seed_flag;
      const SyntheticSpec spec = parse_synthetic_spec(spec_text);
      save_graph(out_path, generate_synthetic(cfg.rng_seed, spec));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace lanegraph::cli

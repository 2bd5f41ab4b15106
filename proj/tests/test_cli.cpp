#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "lanegraph/io.hpp"
#include "lanegraph/synthetic.hpp"
#include "support.hpp"

using namespace lanegraph;
using namespace lanegraph::test;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("cli exit codes") {
  const auto dir = scratch_dir("cli_codes");
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"decompose", "--out", s(dir / "x.json")}).code == cli::kExitUsage);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);

  write_file_atomic(dir / "bad.json", "{\"schema_version\": \"1.0\", \"kind\": \"graph\"}");
  const auto bad = run_cli({"decompose", "--graph", s(dir / "bad.json"), "--out", s(dir / "p.json")});
  CHECK(bad.code == cli::kExitData);
  CHECK(bad.err.find("error:") != std::string::npos);

  save_graph(dir / "g.json", generate_synthetic(1, {3, 2, 0.0, {256, 256}}));
  const auto budget = run_cli({"decompose", "--graph", s(dir / "g.json"), "--max-paths", "4", "--out", s(dir / "p.json")});
  CHECK(budget.code == cli::kExitData);
  CHECK(budget.err.find("budget") != std::string::npos);
  CHECK(run_cli({"decompose", "--graph", s(dir / "g.json"), "--set", "bogus=1", "--out", s(dir / "p.json")}).code ==
        cli::kExitData);
}

TEST_CASE("cli eval of a graph against itself") {
  const auto dir = scratch_dir("cli_eval");
  save_graph(dir / "g.json", generate_synthetic(4, {2, 3, 0.0, {256, 256}}));
  REQUIRE(run_cli({"eval", "--pred", s(dir / "g.json"), "--gt", s(dir / "g.json"), "--out", s(dir / "r.json")}).code ==
          cli::kExitOk);
  const auto r = json::parse(read_file(dir / "r.json"));
  for (const char* key : {"topo_precision", "topo_recall", "geo_precision", "geo_recall", "apls", "graph_iou"}) {
    CHECK(r[key].get<double>() == doctest::Approx(1.0));
  }

  fs::create_directories(dir / "pred");
  fs::create_directories(dir / "gt");
  for (int i = 0; i < 3; ++i) {
    const auto name = "s" + std::to_string(i) + ".json";
    save_graph(dir / "gt" / name, generate_synthetic(i, {1, 3, 0.0, {128, 128}}));
    save_graph(dir / "pred" / name, generate_synthetic(i, {1, 3, 3.0, {128, 128}}));
  }
  REQUIRE(run_cli({"eval", "--pred", s(dir / "pred"), "--gt", s(dir / "gt"), "--jobs", "2", "--out", s(dir / "b1.json")}).code ==
          cli::kExitOk);
  REQUIRE(run_cli({"eval", "--pred", s(dir / "pred"), "--gt", s(dir / "gt"), "--jobs", "1", "--out", s(dir / "b2.json")}).code ==
          cli::kExitOk);
  CHECK(read_file(dir / "b1.json") == read_file(dir / "b2.json"));
  CHECK(json::parse(read_file(dir / "b1.json"))["samples"].size() == 3);
}

TEST_CASE("cli loss and match on a perfect prediction") {
  const auto dir = scratch_dir("cli_loss");
  ProposalDocument gt;
  gt.n_cp = 3;
  gt.proposals = {{1.0, {{0.5, 1.0}, {0.5, 0.5}, {0.2, 0.0}}}, {1.0, {{0.5, 1.0}, {0.6, 0.5}, {0.9, 0.0}}}};
  ProposalDocument pred = gt;
  pred.proposals.insert(pred.proposals.begin(), {0.0, {{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}}});
  write_file_atomic(dir / "gt.json", proposals_to_json(gt));
  write_file_atomic(dir / "pred.json", proposals_to_json(pred));

  const auto loss = run_cli({"loss", "--gt", s(dir / "gt.json"), "--pred", s(dir / "pred.json")});
  REQUIRE(loss.code == cli::kExitOk);
  CHECK(loss.out == "total=0\nregression=0\nclassification=0\n");

  REQUIRE(run_cli({"match", "--gt", s(dir / "gt.json"), "--pred", s(dir / "pred.json"), "--out", s(dir / "m.json")}).code ==
          cli::kExitOk);
  const auto m = json::parse(read_file(dir / "m.json"));
  CHECK(m["total_cost"].get<double>() == 0.0);
  CHECK(m["pairs"] == json::parse("[[0,1],[1,2]]"));
}

TEST_CASE("cli pipeline round trip and determinism") {
  const auto dir = scratch_dir("cli_pipeline");
  auto pipeline = [&](const std::string& tag) {
    const auto g = s(dir / (tag + "_g.json"));
    const auto p = s(dir / (tag + "_p.json"));
    const auto q = s(dir / (tag + "_q.json"));
    const auto a = s(dir / (tag + "_a.json"));
    REQUIRE(run_cli({"generate", "--seed", "21", "--spec", "n_splits=3,depth=3,jitter=2,extent=256x256", "--out", g}).code == 0);
    REQUIRE(run_cli({"decompose", "--graph", g, "--out", p}).code == 0);
    REQUIRE(run_cli({"represent", "--paths", p, "--to", "polyline", "--n-cp", "0", "--out", q}).code == 0);
    REQUIRE(run_cli({"aggregate", "--pred", q, "--p-min", "0", "--d-max", "1e-6", "--extent", "256x256", "--out", a}).code == 0);
    return std::vector<std::string>{read_file(g), read_file(p), read_file(q), read_file(a)};
  };
  const auto first = pipeline("one");
  const auto second = pipeline("two");
  CHECK(first == second);
  CHECK(geometrically_equal(graph_from_json(first[3]), graph_from_json(first[0]), 1e-9));

  REQUIRE(run_cli({"represent", "--paths", s(dir / "one_p.json"), "--to", "bezier", "--degree", "3", "--out",
                   s(dir / "bz.json")}).code == 0);
  const auto bz = proposals_from_json(read_file(dir / "bz.json"));
  CHECK(bz.n_cp == 4u);
  CHECK(bz.proposals.size() == 8);
}

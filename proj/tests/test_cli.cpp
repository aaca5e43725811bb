#include "commands.hpp"

#include "curvlab/graph.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace curvlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("curvlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string gen(const std::string& family, const std::string& weighting = "unit") {
  std::string name = family + "_" + weighting + ".graph.json";
  for (auto& c : name) {
    if (c == ':') c = '_';
  }
  const auto path = (scratch() / name).string();
  REQUIRE(run({"gen", family, "--weighting", weighting, "--out", path}).code == 0);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("gen writes reloadable graphs") {
  const auto c6 = load_graph_file(gen("cycle:6"));
  CHECK(c6.edge_count() == 6);
  const auto k5 = load_graph_file(gen("complete:5", "degree-one"));
  for (Vertex x = 0; x < k5.size(); ++x) CHECK(k5.degree<Rational>(x) == 1);
  CHECK(k5.total_measure<Rational>() == 1);
  CHECK(run({"gen", "dodecahedron:3"}).code == cli::kUsage);
}

TEST_CASE("curvature table") {
  const auto path = gen("cycle:6");
  const auto r = run({"curvature", path});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("pair,d,kappa_primal,kappa_dual,gap\n", 0) == 0);
  CHECK(r.out.find("0|1,1,0,0,0\n") != std::string::npos);

  const auto k2 = (scratch() / "k2.graph.json").string();
  {
    std::ofstream f(k2);
    f << R"({"vertices":[{"id":"a","m":1},{"id":"b","m":1}],"edges":[{"u":"a","v":"b","w":1}]})";
  }
  const auto exact = run({"curvature", k2, "--mode", "exact-rational"});
  CHECK(exact.out == "pair,d,kappa_primal,kappa_dual,gap,kappa_primal_exact,kappa_dual_exact\na|b,1,2,2,0,2,2\n");
  CHECK(run({"curvature", k2, "--mode", "bogus"}).code == cli::kUsage);
  CHECK(run({"curvature", (scratch() / "missing.graph.json").string()}).code == cli::kUsage);
}

TEST_CASE("determinism and thread count") {
  const auto path = gen("grid:3x3");
  const auto a = run({"curvature", path, "--pairs", "all", "--threads", "1"});
  const auto b = run({"curvature", path, "--pairs", "all", "--threads", "4"});
  CHECK(a.out == b.out);
  const auto k5 = gen("complete:5", "degree-one");
  CHECK(run({"concentration", k5, "--random", "5", "--seed", "3"}).out ==
        run({"concentration", k5, "--random", "5", "--seed", "3"}).out);
}

TEST_CASE("plan and surgery") {
  const auto grid = gen("grid:4x4");
  const auto plan = run({"plan", grid, "--pair", "0_0,0_1", "--mode", "exact"});
  REQUIRE(plan.code == 0);
  CHECK(nlohmann::json::parse(plan.out)["feasible"] == true);

  const auto out = (scratch() / "surgery.json").string();
  REQUIRE(run({"surgery", grid, "--pair", "1_1,1_2", "--mode", "exact", "--out", out}).code == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["value_before"] == doc["value_after"]);
  CHECK(doc["bound"] == "1/2");
  CHECK(parse_rational(doc["mass_beyond"].get<std::string>()) >= Rational(1, 2));
  CHECK(doc["bound_holds"] == true);

  CHECK(run({"surgery", grid, "--pair", "0_0,0_1", "--xprime", "3_3"}).code == cli::kUsage);
}

TEST_CASE("bakry-emery") {
  const auto r = run({"bakry-emery", gen("complete:2")});
  CHECK(r.out == "vertex,be\n0,2\n1,2\n");
  const auto forms = run({"bakry-emery", gen("path:4"), "--forms", "0"});
  CHECK(nlohmann::json::parse(forms.out)["basis"].size() == 2);
  CHECK(nlohmann::json::parse(run({"bakry-emery", gen("cycle:6"), "--format", "json"}).out)["vertices"].size() == 6);
}

TEST_CASE("no-implication") {
  const auto dir = scratch() / "witness";
  const auto small = run({"no-implication", "--max-vertices", "2", "--out", dir.string()});
  CHECK(small.code == cli::kFail);
  CHECK(small.out.find("exhausted") != std::string::npos);
  CHECK(run({"no-implication", "--max-vertices", "9"}).code == cli::kUsage);

  const auto full = run({"no-implication", "--max-vertices", "7", "--no-families", "--out", dir.string()});
  CHECK(full.code == 0);
  const auto a = load_graph_file((dir / "be_negative_kappa_nonnegative.graph.json").string());
  const auto b = load_graph_file((dir / "kappa_negative_be_nonnegative.graph.json").string());
  CHECK(a.connected());
  CHECK(b.connected());
}

TEST_CASE("heat, decay, concentration") {
  const auto k5 = gen("complete:5", "degree-one");
  const auto fpath = (scratch() / "f.json").string();
  {
    std::ofstream f(fpath);
    f << R"({"0": 0.4, "1": -0.1, "2": -0.1, "3": -0.1, "4": "-1/10"})";
  }
  const auto heat = run({"heat", k5, "--function", fpath, "--t-grid", "0,1"});
  CHECK(heat.code == 0);
  CHECK(heat.out.rfind("t,0,1,2,3,4\n0,0.4,-0.1,", 0) == 0);

  CHECK(run({"decay", k5, "--function", fpath}).code == 0);
  CHECK(run({"decay", k5, "--random", "10"}).code == 0);
  CHECK(run({"concentration", k5, "--function", fpath}).code == 0);
  CHECK(run({"concentration", k5, "--random", "10", "--K", "auto"}).code == 0);
  CHECK(run({"decay", k5}).code == cli::kUsage);

  const auto deg = run({"concentration", gen("cycle:6"), "--random", "1"});
  CHECK(deg.code == cli::kUsage);
  CHECK(deg.err.find("Deg_max ≤ 1") != std::string::npos);
  const auto big = run({"concentration", k5, "--random", "1", "--K", "10"});
  CHECK(big.code == cli::kUsage);
  CHECK(big.err.find("exceeds computed curvature infimum") != std::string::npos);
}

TEST_CASE("export-dot and hypotheses") {
  const auto c6 = gen("cycle:6");
  const auto table = (scratch() / "c6.csv").string();
  REQUIRE(run({"curvature", c6, "--out", table}).code == 0);
  const auto dot = run({"export-dot", c6, "--curvature", table}).out;
  std::size_t labels = 0;
  for (auto pos = dot.find("[label=\"0\"]"); pos != std::string::npos; pos = dot.find("[label=\"0\"]", pos + 1)) {
    ++labels;
  }
  CHECK(labels == 6);

  const auto h = run({"check-hypotheses", c6});
  CHECK(h.code == 0);
  CHECK(nlohmann::json::parse(h.out)["liouville_hypotheses_met"] == true);
}

TEST_CASE("usage") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"curvature"}).code == cli::kUsage);
}

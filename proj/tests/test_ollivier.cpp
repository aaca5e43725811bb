#include "oracle/vertex_enumeration.hpp"
#include "support.hpp"

#include "curvlab/ollivier.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace curvlab;
using curvlab::testing::k2;
using curvlab::testing::path3;

namespace {

Rational oracle_kappa(const WeightedGraph& g, Vertex x0, Vertex y0) {
  const auto r = oracle::enumerate_vertices(oracle::transport_system(g, x0, y0));
  REQUIRE(r.feasible);
  return r.best;
}

}  // namespace

TEST_CASE("K2: both formulations give 2") {
  const auto g = k2();
  CHECK(oracle_kappa(g, 0, 1) == 2);
  const auto p = curvature_primal<Rational>(g, 0, 1);
  CHECK(p.kappa == 2);
  CHECK(p.plan.get(1, 0) == 0);
  const auto d = curvature_dual<Rational>(g, 0, 1);
  CHECK(d.kappa == 2);
  CHECK(d.witness.at(0) == 0);
  CHECK(d.witness.at(1) == 1);
  CHECK(curvature_primal<double>(g, 0, 1).kappa == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("path a-b-c, pair (a,b): kappa = 1") {
  const auto g = path3();
  const Vertex a = g.index("a"), b = g.index("b");
  CHECK(oracle_kappa(g, a, b) == 1);
  CHECK(curvature_primal<Rational>(g, a, b).kappa == 1);
  CHECK(curvature_dual<Rational>(g, a, b).kappa == 1);
}

TEST_CASE("cycle-6 and lattice segment: zero curvature on edges") {
  const auto c6 = generate("cycle:6", Weighting::Unit);
  for (auto [x, y] : edge_pairs(c6)) {
    CHECK(oracle_kappa(c6, x, y) == 0);
    CHECK(curvature_primal<Rational>(c6, x, y).kappa == 0);
    CHECK(curvature_dual<Rational>(c6, x, y).kappa == 0);
  }
  const auto z = generate("segment-of-integer-lattice:21", Weighting::Unit);
  for (Vertex x = 1; x + 2 < z.size(); ++x) {
    CHECK(oracle_kappa(z, x, x + 1) == 0);
    CHECK(curvature_primal<Rational>(z, x, x + 1).kappa == 0);
    CHECK(curvature_dual<Rational>(z, x, x + 1).kappa == 0);
  }
}

TEST_CASE("degenerate pairs are errors") {
  const auto g = k2();
  CHECK_THROWS_AS(curvature_primal<double>(g, 0, 0), std::invalid_argument);
  const auto split = WeightedGraph::build({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}});
  CHECK_THROWS_AS(curvature_primal<double>(split, 0, 2), std::domain_error);
  CHECK_THROWS_AS(curvature_dual<double>(split, 0, 2), std::domain_error);
  const auto report = curvature_report(split, 0, 2, Mode::Float);
  CHECK_FALSE(report.ok());
}

TEST_CASE("dual witness: constant shifts leave the objective unchanged") {
  const auto g = path3();
  const auto d = curvature_dual<Rational>(g, 0, 1);
  auto shifted = VertexFunction<Rational>(g.size());
  for (Vertex z : d.witness.domain()) shifted.set(z, d.witness.at(z) + Rational(17, 3));
  CHECK(dual_objective(g, 0, 1, shifted) == d.kappa);
  CHECK(dual_objective(g, 0, 1, d.witness) == d.kappa);
}

TEST_CASE("verify_plan and plan_value") {
  const auto g = k2();
  auto opt = curvature_primal<Rational>(g, 0, 1);
  CHECK(verify_plan(g, opt.plan).feasible);
  CHECK(plan_value(g, opt.plan) == 2);

  auto bumped = curvature_primal<double>(g, 0, 1).plan;
  bumped.entries[{1, 1}] += 0.1;
  const auto check = verify_plan(g, bumped);
  CHECK_FALSE(check.feasible);
  CHECK(check.row_residuals.at(1) == doctest::Approx(0.1));

  TransportPlan<double> zero{0, 1, {}};
  CHECK_FALSE(verify_plan(g, zero).feasible);

  const auto p = path3();
  CHECK_THROWS_AS(verify_plan(p, TransportPlan<double>{0, 1, {{{2, 0}, 1.0}}}), std::invalid_argument);

  // support on pairs at distance d(x0, y0) has zero value
  const auto c6 = generate("cycle:6", Weighting::Unit);
  TransportPlan<Rational> flat{0, 1, {{{5, 0}, 1}, {{1, 2}, 1}}};
  CHECK(plan_value(c6, flat) == 0);
  CHECK(mass_beyond(g, opt.plan, 1) == 0);
}

TEST_CASE("duality and plan feasibility on random graphs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = curvlab::testing::random_connected_graph(rng, 9);
    for (auto [x, y] : all_pairs(g)) {
      const auto p = curvature_primal<double>(g, x, y);
      const auto d = curvature_dual<double>(g, x, y);
      CHECK(std::abs(p.kappa - d.kappa) <= 1e-7);
      CHECK(verify_plan(g, p.plan).feasible);
      CHECK(plan_value(g, p.plan) == doctest::Approx(p.kappa).epsilon(1e-9));
      CHECK(std::abs(dual_objective(g, x, y, d.witness) - d.kappa) <= 1e-9);
      CHECK(mass_beyond(g, p.plan, g.diameter()) == 0.0);
    }
  }
}

TEST_CASE("exact duality, symmetry and scale homogeneity") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const auto g = curvlab::testing::random_connected_graph(rng, 7);
    const Rational c(3, 2);
    const auto scaled = g.with_scaled_measure(c);
    for (auto [x, y] : all_pairs(g)) {
      const auto p = curvature_primal<Rational>(g, x, y).kappa;
      CHECK(p == curvature_dual<Rational>(g, x, y).kappa);
      CHECK(p == curvature_primal<Rational>(g, y, x).kappa);
      CHECK(curvature_primal<Rational>(scaled, x, y).kappa == c * p);
      const Rational bound = 2 * (g.degree<Rational>(x) + g.degree<Rational>(y));
      CHECK(Rational(static_cast<long>(g.distance(x, y))) * p <= bound);
    }
  }
}

TEST_CASE("dual LP pruning keeps the feasible set") {
  // Every ordered pair of the domain satisfies the Lipschitz bound at the
  // optimum, including the pairs that were not written as rows.
  const auto g = generate("grid:4x4", Weighting::Unit);
  for (auto [x, y] : all_pairs(g)) {
    const auto d = curvature_dual<Rational>(g, x, y);
    for (Vertex u : d.witness.domain()) {
      for (Vertex v : d.witness.domain()) {
        CHECK(d.witness.at(u) - d.witness.at(v) <= static_cast<long>(g.distance(u, v)));
      }
    }
  }
}

TEST_CASE("plan surgery: K2 with x' = y0") {
  // d0 = 1 forces x' = y0; the rewrite is well defined and ships nothing
  // beyond distance 1 because K2 has no such pairs.
  const auto g = k2();
  const auto report = surgery_check<Rational>(g, 0, 1);
  CHECK(report.x_prime == 1);
  CHECK(report.value_after == report.value_before);
  CHECK(report.mass_beyond == 0);
  CHECK(report.epsilon == 2);
  CHECK_FALSE(report.bound_applies);
}

TEST_CASE("plan surgery: preconditions") {
  const auto g = generate("cycle:6", Weighting::Unit);
  const auto opt = curvature_primal<Rational>(g, 0, 2);
  CHECK_THROWS_AS(plan_surgery(g, 0, 2, 5, opt.plan), std::invalid_argument);  // wrong direction
  CHECK_THROWS_AS(plan_surgery(g, 0, 2, 3, opt.plan), std::invalid_argument);  // not a neighbor

  // On C4 the optimal plan for an antipodal pair keeps both neighbors in
  // place; crossing them over is feasible but worth 0 instead of 2.
  const auto c4 = generate("cycle:4", Weighting::Unit);
  const TransportPlan<Rational> crossed{0, 2, {{{1, 3}, 1}, {{3, 1}, 1}}};
  REQUIRE(verify_plan(c4, crossed).feasible);
  REQUIRE(plan_value(c4, crossed) == 0);
  REQUIRE(curvature_primal<Rational>(c4, 0, 2).kappa == 2);
  CHECK_THROWS_AS(plan_surgery(c4, 0, 2, 1, crossed), std::invalid_argument);
}

TEST_CASE("plan surgery: cycle-6 at distance 2") {
  const auto g = generate("cycle:6", Weighting::Unit);
  const Vertex x0 = 0, y0 = 2;
  REQUIRE(strict_progress_neighbors(g, x0, y0) == std::vector<Vertex>{1});
  const auto rho0 = curvature_primal<Rational>(g, x0, y0).plan;
  const auto rho = plan_surgery(g, x0, y0, 1, rho0);
  CHECK(verify_plan(g, rho).max_residual == 0);
  CHECK(plan_value(g, rho) == plan_value(g, rho0));
  Rational row(0);
  for (Vertex y : g.ball(y0, 1)) {
    if (g.distance(1, y) >= 2) CHECK(rho.get(1, y) == 0);
    row += rho.get(1, y);
  }
  CHECK(row == g.rate<Rational>(x0, 1));

  std::ostringstream dump;
  dump_surgery_terms(dump, g, rho0, rho);
  CHECK(dump.str().find("sum ") != std::string::npos);
}

TEST_CASE("plan surgery: mass bound on zero-curvature pairs") {
  for (const char* family : {"cycle:6", "grid:4x4"}) {
    const auto g = generate(family, Weighting::Unit);
    for (auto [x, y] : edge_pairs(g)) {
      const auto report = surgery_check<Rational>(g, x, y);
      if (report.kappa != 0) continue;
      CHECK(report.value_after == report.value_before);
      CHECK(report.forbidden_mass == 0);
      CHECK(report.bound == Rational(1, 2));
      CHECK(report.mass_beyond >= Rational(1, 2));
      CHECK(report.bound_holds);
    }
  }
}

TEST_CASE("sweeps") {
  const auto c6 = generate("cycle:6", Weighting::Unit);
  const auto rows = curvature_sweep(c6, edge_pairs(c6), Mode::Float, Method::Both, 2);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.ok());
    CHECK(*r.kappa_primal == doctest::Approx(rows[0].kappa()));
    CHECK(*r.gap <= kDualityGapTolerance);
  }
  const auto q3 = generate("hypercube:3", Weighting::Unit);
  const auto cube = curvature_sweep(q3, edge_pairs(q3), Mode::Exact);
  for (const auto& r : cube) CHECK(r.exact_primal == cube[0].exact_primal);
  const auto k = curvature_sweep(k2(), edge_pairs(k2()), Mode::Exact);
  REQUIRE(k.size() == 1);
  CHECK(k[0].exact_primal == "2");
  CHECK(k[0].exact_dual == "2");
  CHECK(*k[0].gap == 0.0);

  CHECK(parse_pair_list(c6, "0,1; 2,3\n4,5").size() == 3);
  CHECK_THROWS_AS(parse_pair_list(c6, "0,9"), std::invalid_argument);
  CHECK_THROWS_AS(parse_pair_list(c6, "0"), std::invalid_argument);

  const auto m = min_curvature(c6);
  CHECK(m.any);
  CHECK(m.value <= 1e-12);
}

TEST_CASE("golden spot values agree with the oracle") {
  std::ifstream in(std::string(CURVLAB_GOLDEN_DIR) + "/spot_values.json");
  REQUIRE(in);
  const auto doc = nlohmann::json::parse(in);
  REQUIRE(doc["spot_values"].size() > 0);
  for (const auto& row : doc["spot_values"]) {
    const auto g = generate(row["graph"].get<std::string>(), parse_weighting(row["weighting"].get<std::string>()));
    const Vertex x = g.index(row["x"].get<std::string>()), y = g.index(row["y"].get<std::string>());
    CHECK(oracle_kappa(g, x, y) == parse_rational(row["kappa"].get<std::string>()));
  }
}

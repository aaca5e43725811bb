#include "oracle/vertex_enumeration.hpp"
#include "support.hpp"

#include "curvlab/lp.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace curvlab;

TEST_CASE("maximize x subject to x <= 3") {
  LinearProgram<double> lp;
  const auto x = lp.add_variable(1.0);
  lp.add_constraint({{x, 1.0}}, Relation::LessEqual, 3.0);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(3.0));
  CHECK(sol.duals.at(0) == doctest::Approx(1.0));
}

TEST_CASE("degenerate optimum of x + y = 1") {
  LinearProgram<Rational> lp;
  const auto x = lp.add_variable(1);
  const auto y = lp.add_variable(1);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::Equal, 1);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == 1);
  CHECK(sol.max_residual == 0);
}

TEST_CASE("transport polytope of K2 has optimum 2") {
  // cells (a,a),(a,b),(b,a),(b,b); rows: rho(b,a)+rho(b,b) = 1, rho(a,a)+rho(b,a) = 1
  LinearProgram<Rational> lp;
  const auto aa = lp.add_variable(1);
  const auto ab = lp.add_variable(0);
  const auto ba = lp.add_variable(0);
  const auto bb = lp.add_variable(1);
  (void)ab;
  lp.add_constraint({{ba, 1}, {bb, 1}}, Relation::Equal, 1);
  lp.add_constraint({{aa, 1}, {ba, 1}}, Relation::Equal, 1);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == 2);
  CHECK(sol.assignment[ba] == 0);

  const auto g = curvlab::testing::k2();
  const auto oracle = oracle::enumerate_vertices(oracle::transport_system(g, 0, 1));
  CHECK(oracle.best == 2);
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram<double> infeasible;
  const auto x = infeasible.add_variable(1.0);
  infeasible.add_constraint({{x, 1.0}}, Relation::LessEqual, -1.0);
  CHECK(solve(infeasible).status == LpStatus::Infeasible);

  LinearProgram<Rational> unbounded;
  const auto u = unbounded.add_variable(1);
  const auto v = unbounded.add_variable(0);
  unbounded.add_constraint({{u, 1}, {v, -1}}, Relation::LessEqual, 2);
  CHECK(solve(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("free variables and upper bounds") {
  // min x subject to x >= -4 written as -x <= 4, x free
  LinearProgram<Rational> lp;
  lp.sense = Sense::Minimize;
  const auto x = lp.add_variable(1, true);
  const auto y = lp.add_variable(-1, false, Rational(5, 2));
  lp.add_constraint({{x, -1}}, Relation::LessEqual, 4);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.assignment[x] == -4);
  CHECK(sol.assignment[y] == Rational(5, 2));
  CHECK(sol.value == Rational(-13, 2));
}

TEST_CASE("dimension mismatch and bad indices are rejected") {
  LinearProgram<double> lp;
  lp.add_variable(1.0);
  lp.objective.push_back(2.0);
  CHECK_THROWS_AS(solve(lp), std::invalid_argument);

  LinearProgram<double> bad_index;
  bad_index.add_variable(1.0);
  bad_index.add_constraint({{3, 1.0}}, Relation::LessEqual, 1.0);
  CHECK_THROWS_AS(solve(bad_index), std::invalid_argument);

  LinearProgram<double> nan;
  nan.add_variable(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(solve(nan), std::invalid_argument);
}

namespace {

// Random bounded LP with rational data of denominator <= 64 and a known
// feasible point.
LinearProgram<Rational> random_lp(std::mt19937_64& rng, std::vector<Rational>& feasible_point) {
  std::uniform_int_distribution<int> nvars(1, 6), nrows(1, 6), num(-12, 12), den(1, 64), kind(0, 3);
  const int n = nvars(rng);
  LinearProgram<Rational> lp;
  lp.sense = kind(rng) < 2 ? Sense::Maximize : Sense::Minimize;
  feasible_point.clear();
  for (int j = 0; j < n; ++j) {
    const bool free = kind(rng) == 0;
    lp.add_variable(Rational(num(rng), den(rng)), free, Rational(std::abs(num(rng)) + 1, den(rng)) + 4);
    feasible_point.push_back(Rational(num(rng), 64) / 4);
    if (!free && feasible_point.back() < 0) feasible_point.back() = -feasible_point.back();
  }
  for (int j = 0; j < n; ++j) {
    if (lp.variables[j].free) {  // box free variables from below too
      lp.add_constraint({{static_cast<std::size_t>(j), -1}}, Relation::LessEqual, Rational(7));
    }
  }
  const int m = nrows(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Rational lhs = 0;
    for (int j = 0; j < n; ++j) {
      const Rational a(num(rng), den(rng));
      terms.emplace_back(j, a);
      lhs += a * feasible_point[j];
    }
    if (kind(rng) == 0) {
      lp.add_constraint(std::move(terms), Relation::Equal, lhs);
    } else {
      lp.add_constraint(std::move(terms), Relation::LessEqual, lhs + Rational(kind(rng), 8));
    }
  }
  return lp;
}

LinearProgram<double> to_float(const LinearProgram<Rational>& lp) {
  LinearProgram<double> out;
  out.sense = lp.sense;
  for (std::size_t j = 0; j < lp.variables.size(); ++j) {
    std::optional<double> upper;
    if (lp.variables[j].upper) upper = to_double(*lp.variables[j].upper);
    out.add_variable(to_double(lp.objective[j]), lp.variables[j].free, upper);
  }
  for (const auto& row : lp.constraints) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (const auto& [j, a] : row.terms) terms.emplace_back(j, to_double(a));
    out.add_constraint(std::move(terms), row.relation, to_double(row.rhs));
  }
  return out;
}

}  // namespace

TEST_CASE("float and rational modes agree; weak duality against feasible points") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Rational> point;
    const auto lp = random_lp(rng, point);
    REQUIRE(max_violation(lp, point) == 0);
    const auto exact = solve(lp);
    REQUIRE(exact.status == LpStatus::Optimal);
    CHECK(exact.max_residual == 0);
    CHECK(max_violation(lp, exact.assignment) == 0);

    // Any feasible point is no better than the optimum.
    const Rational at_point = objective_value(lp, point);
    if (lp.sense == Sense::Maximize) {
      CHECK(at_point <= exact.value);
    } else {
      CHECK(at_point >= exact.value);
    }

    const auto approx = solve(to_float(lp));
    REQUIRE(approx.status == LpStatus::Optimal);
    CHECK(std::abs(approx.value - to_double(exact.value)) <= 1e-9);
    CHECK(approx.max_residual <= 1e-9);
  }
}

TEST_CASE("dual prices certify the optimum of bound-free programs") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(1, 9), den(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    // max c.x s.t. A x <= b, x >= 0 with A, b, c positive: bounded, feasible.
    LinearProgram<Rational> lp;
    for (int j = 0; j < 4; ++j) lp.add_variable(Rational(num(rng), den(rng)));
    for (int i = 0; i < 3; ++i) {
      std::vector<std::pair<std::size_t, Rational>> terms;
      for (std::size_t j = 0; j < 4; ++j) terms.emplace_back(j, Rational(num(rng), den(rng)));
      lp.add_constraint(std::move(terms), Relation::LessEqual, Rational(num(rng), den(rng)));
    }
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    Rational dual_value = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(sol.duals[i] >= 0);
      dual_value += sol.duals[i] * lp.constraints[i].rhs;
    }
    CHECK(dual_value == sol.value);
    // dual feasibility: A^T y >= c
    for (std::size_t j = 0; j < 4; ++j) {
      Rational col = 0;
      for (std::size_t i = 0; i < 3; ++i) col += lp.constraints[i].terms[j].second * sol.duals[i];
      CHECK(col >= lp.objective[j]);
    }
  }
}

TEST_CASE("cycling-prone degenerate program terminates under Bland's rule") {
  // Beale's classic cycling example.
  LinearProgram<Rational> lp;
  lp.add_variable(Rational(3, 4));
  lp.add_variable(-150);
  lp.add_variable(Rational(1, 50));
  lp.add_variable(-6);
  lp.add_constraint({{0, Rational(1, 4)}, {1, -60}, {2, Rational(-1, 25)}, {3, 9}}, Relation::LessEqual, 0);
  lp.add_constraint({{0, Rational(1, 2)}, {1, -90}, {2, Rational(-1, 50)}, {3, 3}}, Relation::LessEqual, 0);
  lp.add_constraint({{2, 1}}, Relation::LessEqual, 1);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == Rational(1, 20));
}

TEST_CASE("plain-text dump") {
  LinearProgram<Rational> lp;
  lp.add_variable(Rational(1, 2), true, std::nullopt, "x");
  lp.add_constraint({{0, 1}}, Relation::Equal, 3);
  std::ostringstream out;
  write_lp(out, lp);
  CHECK(out.str() == "sense max\nvar 0 x free cost 1/2\nrow 0 eq rhs 3 : 0*1\n");
}

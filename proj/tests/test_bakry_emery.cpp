#include "oracle/bakry_emery_bisection.hpp"
#include "support.hpp"

#include "curvlab/bakry_emery.hpp"
#include "curvlab/laplacian.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace curvlab;

TEST_CASE("Gamma and Gamma2 on K2") {
  const auto g = testing::k2();
  const auto f = VertexFunction<Rational>::total({0, 1});
  CHECK(gamma(g, f, f, 0) == Rational(1, 2));
  // Lf = (1, -1); Gamma2(f)(a) = 1/2 L Gamma(f)(a) - Gamma(f, Lf)(a) = 0 + 1
  CHECK(gamma2(g, f, 0) == 1);
  CHECK(be_curvature(g, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Gamma needs the ball") {
  const auto g = testing::path3();
  VertexFunction<double> f(3);
  f.set(0, 0.0);
  f.set(1, 1.0);
  CHECK_NOTHROW(gamma(g, f, f, 0));
  CHECK_THROWS_AS(gamma(g, f, f, 1), std::domain_error);
  CHECK_THROWS_AS(gamma2(g, f, 0), std::domain_error);
}

TEST_CASE("known values: complete graphs, cycles, hypercube") {
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto g = generate("complete:" + std::to_string(n), Weighting::Unit);
    CHECK(be_curvature(g, 0) == doctest::Approx(1.0 + n / 2.0).epsilon(1e-10));
  }
  for (std::size_t n = 5; n <= 8; ++n) {
    const auto g = generate("cycle:" + std::to_string(n), Weighting::Unit);
    for (double k : be_curvatures(g, 1)) CHECK(std::abs(k) <= 1e-10);
  }
  for (double k : be_curvatures(generate("hypercube:3", Weighting::Unit), 2)) CHECK(k == doctest::Approx(2.0));
}

TEST_CASE("pencil and Schur complement agree with bisection") {
  CHECK(be_curvature(generate("cycle:6", Weighting::Unit), 0) ==
        doctest::Approx(oracle::bisection_be(generate("cycle:6", Weighting::Unit), 0)).epsilon(1e-8));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testing::random_connected_graph(rng, 8);
    for (Vertex x = 0; x < g.size(); ++x) {
      const double fast = be_curvature(g, x);
      const double slow = oracle::bisection_be(g, x);
      CHECK(std::abs(fast - slow) <= 1e-7 * std::max(1.0, std::abs(slow)));
    }
  }
}

TEST_CASE("curvature-dimension inequality holds on random functions") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> coeff(-9, 9);
  for (const char* name : {"grid:3x4", "path:5", "complete:4"}) {
    const auto g = generate(name, Weighting::Unit);
    for (Vertex x = 0; x < g.size(); ++x) {
      const double k = be_curvature(g, x);
      for (int s = 0; s < 10; ++s) {
        std::vector<Rational> v(g.size());
        for (auto& c : v) c = Rational(coeff(rng), 3);
        const auto f = VertexFunction<Rational>::total(v);
        CHECK(to_double(gamma2(g, f, x)) >= k * to_double(gamma(g, f, f, x)) - 1e-9);
      }
    }
  }
}

TEST_CASE("local forms") {
  const auto g = generate("path:4", Weighting::Unit);
  const auto forms = local_forms(g, 0);
  REQUIRE(forms.basis == std::vector<Vertex>{1, 2});
  CHECK(forms.sphere1 == 1);
  CHECK(forms.gamma_matrix.isApprox(forms.gamma_matrix.transpose()));
  CHECK(forms.gamma2_matrix == forms.gamma2_matrix.transpose());
  CHECK(forms.gamma_matrix(1, 1) == 0.0);
  CHECK(forms.gamma2_matrix(1, 1) > 0.0);
  const auto doc = nlohmann::json::parse(local_forms_json(g, forms));
  CHECK(doc["basis"][1] == "2");
  CHECK(doc["gamma2"].size() == 2);

  const auto lonely = WeightedGraph::build({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}});
  CHECK_THROWS_AS(be_curvature(lonely, 2), std::domain_error);
}

TEST_CASE("connected graph enumeration") {
  std::vector<std::size_t> counts(8, 0);
  for (const auto& s : connected_graphs(7)) {
    ++counts[s.n];
    const auto g = from_edge_list(s.n, s.edges, Weighting::Unit);
    CHECK(g.connected());
  }
  CHECK(counts == std::vector<std::size_t>{0, 1, 1, 2, 6, 21, 112, 853});
}

TEST_CASE("counterexample search") {
  const auto empty = counterexample_search({});
  CHECK(empty.exhausted());
  CHECK(empty.examined == 0);
  const auto trivial = counterexample_search({testing::k2()});
  CHECK(trivial.exhausted());
  CHECK_FALSE(trivial.be_negative_kappa_nonnegative);

  const auto r = counterexample_search(search_catalog(7), 2);
  REQUIRE_FALSE(r.exhausted());
  const auto& a = *r.be_negative_kappa_nonnegative;
  CHECK(a.min_be < -kSignTolerance);
  for (const auto& p : a.pairs) CHECK(parse_rational(p.exact_primal) >= 0);
  const auto& b = *r.kappa_negative_be_nonnegative;
  CHECK(b.min_kappa < -kSignTolerance);
  for (double k : b.be) CHECK(k >= -kSignTolerance);
}

TEST_CASE("Gamma as a product rule defect") {
  // 2 Gamma(g, h) = L(gh) - g Lh - h Lg, exactly.
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> coeff(-7, 7);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = testing::random_connected_graph(rng, 8);
    std::vector<Rational> a(g.size()), b(g.size()), ab(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
      a[x] = Rational(coeff(rng), 3);
      b[x] = Rational(coeff(rng), 4);
      ab[x] = a[x] * b[x];
    }
    const auto f = VertexFunction<Rational>::total(a), h = VertexFunction<Rational>::total(b);
    const auto lf = laplacian_apply(g, f), lh = laplacian_apply(g, h);
    const auto lfh = laplacian_apply(g, VertexFunction<Rational>::total(ab));
    for (Vertex x = 0; x < g.size(); ++x) {
      CHECK(2 * gamma(g, f, h, x) == lfh.at(x) - f.at(x) * lh.at(x) - h.at(x) * lf.at(x));
      CHECK(gamma(g, f, f, x) >= 0);
      std::vector<Rational> a2(a);
      for (auto& v : a2) v *= 2;
      const auto f2 = VertexFunction<Rational>::total(a2);
      CHECK(gamma(g, f2, h, x) == 2 * gamma(g, f, h, x));
      CHECK(gamma2(g, f2, x) == 4 * gamma2(g, f, x));
    }
  }
}

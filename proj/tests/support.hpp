#pragma once

#include "curvlab/graph.hpp"

#include <random>
#include <string>
#include <vector>

namespace curvlab::testing {

inline WeightedGraph k2(const Rational& w = 1, const Rational& ma = 1, const Rational& mb = 1) {
  return WeightedGraph::build({{"a", ma}, {"b", mb}}, {{"a", "b", w}});
}

inline WeightedGraph path3() {
  return WeightedGraph::build({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}, {"b", "c", 1}});
}

inline Rational random_fraction(std::mt19937_64& rng, long max_num = 8, long max_den = 8) {
  std::uniform_int_distribution<long> num(1, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rational(num(rng), den(rng));
}

/// Connected graph on 2..max_n vertices: random spanning tree plus random
/// chords, weights and measures p/q with p, q in [1, 8].
inline WeightedGraph random_connected_graph(std::mt19937_64& rng, std::size_t max_n = 12) {
  std::uniform_int_distribution<std::size_t> size(2, max_n);
  const std::size_t n = size(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double density = 0.1 + 0.5 * unit(rng);
  std::vector<VertexSpec> vertices;
  for (std::size_t i = 0; i < n; ++i) vertices.push_back({"v" + std::to_string(i), random_fraction(rng)});
  std::vector<EdgeSpec> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    const std::size_t j = parent(rng);
    used[i][j] = used[j][i] = true;
    edges.push_back({vertices[j].id, vertices[i].id, random_fraction(rng)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!used[i][j] && unit(rng) < density) edges.push_back({vertices[i].id, vertices[j].id, random_fraction(rng)});
    }
  }
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

}  // namespace curvlab::testing

#pragma once

#include "curvlab/graph.hpp"
#include "curvlab/vertex_function.hpp"

namespace curvlab {

/// Lf(x) = sum_y q(x, y) (f(y) - f(x)); needs f on B1(x).
template <class T>
T laplacian_at(const WeightedGraph& g, const VertexFunction<T>& f, Vertex x) {
  T sum(0);
  const T& fx = f.at(x);
  for (const auto& nb : g.neighbors(x)) sum += g.rate<T>(x, nb.vertex) * (f.at(nb.vertex) - fx);
  return sum;
}

/// Pointwise Laplacian of a total function.
template <class T>
VertexFunction<T> laplacian_apply(const WeightedGraph& g, const VertexFunction<T>& f) {
  f.require_total("laplacian_apply");
  if (f.size() != g.size()) throw std::invalid_argument("function size does not match the graph");
  std::vector<T> out(g.size());
  for (Vertex x = 0; x < g.size(); ++x) out[x] = laplacian_at(g, f, x);
  return VertexFunction<T>::total(std::move(out));
}

}  // namespace curvlab

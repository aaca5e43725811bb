#pragma once

#include "curvlab/graph.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvlab {

/// Real-valued function on V, possibly partial (explicit domain).
template <class T = double>
class VertexFunction {
 public:
  VertexFunction() = default;
  explicit VertexFunction(std::size_t n) : values_(n), defined_(n, false) {}

  static VertexFunction total(std::vector<T> values) {
    VertexFunction f;
    f.defined_.assign(values.size(), true);
    f.values_ = std::move(values);
    return f;
  }

  static VertexFunction constant(std::size_t n, const T& value) {
    return total(std::vector<T>(n, value));
  }

  std::size_t size() const { return values_.size(); }
  bool has(Vertex x) const { return x < defined_.size() && defined_[x]; }

  const T& at(Vertex x) const {
    if (!has(x)) throw std::domain_error("undefined value at vertex index " + std::to_string(x));
    return values_[x];
  }
  const T& operator()(Vertex x) const { return at(x); }

  void set(Vertex x, T value) {
    values_.at(x) = std::move(value);
    defined_[x] = true;
  }

  bool is_total() const { return std::all_of(defined_.begin(), defined_.end(), [](bool b) { return b; }); }

  std::vector<Vertex> domain() const {
    std::vector<Vertex> out;
    for (Vertex x = 0; x < defined_.size(); ++x) {
      if (defined_[x]) out.push_back(x);
    }
    return out;
  }

  /// Raw storage; entries outside the domain are value-initialized.
  const std::vector<T>& values() const { return values_; }

  void require_total(const char* what) const {
    if (!is_total()) throw std::domain_error(std::string(what) + " requires a total function");
  }

 private:
  std::vector<T> values_;
  std::vector<bool> defined_;
};

/// (f(x) - f(y)) / d(x, y) for x != y in the same component.
template <class T>
T gradient(const WeightedGraph& g, const VertexFunction<T>& f, Vertex x, Vertex y) {
  const std::size_t d = g.distance(x, y);
  if (x == y || d == kUnreachable) throw std::domain_error("gradient needs distinct connected vertices");
  return (f.at(x) - f.at(y)) / T(static_cast<long>(d));
}

/// sup of f(x) - f(y) over adjacent ordered pairs with both ends in the
/// domain. Pair exchange makes this the absolute-value supremum.
template <class T>
T gradient_sup_norm(const WeightedGraph& g, const VertexFunction<T>& f) {
  T best(0);
  for (Vertex x = 0; x < g.size(); ++x) {
    if (!f.has(x)) continue;
    for (const auto& nb : g.neighbors(x)) {
      if (!f.has(nb.vertex)) continue;
      T diff = f.at(x) - f.at(nb.vertex);
      if (diff > best) best = diff;
    }
  }
  return best;
}

/// sup |f| over the domain.
template <class T>
T sup_norm(const VertexFunction<T>& f) {
  T best(0);
  for (Vertex x : f.domain()) {
    T v = abs_value(f.at(x));
    if (v > best) best = v;
  }
  return best;
}

inline VertexFunction<double> to_double(const VertexFunction<Rational>& f) {
  VertexFunction<double> out(f.size());
  for (Vertex x : f.domain()) out.set(x, to_double(f.at(x)));
  return out;
}

inline const VertexFunction<double>& to_double(const VertexFunction<double>& f) { return f; }

}  // namespace curvlab

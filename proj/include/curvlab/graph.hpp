#pragma once

#include "curvlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace curvlab {

/// Dense vertex index in [0, |V|). Ids are the user-facing names.
using Vertex = std::size_t;

/// Distance returned for pairs in different connected components.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Graphs up to this size keep an all-pairs distance table.
inline constexpr std::size_t kDistanceCacheLimit = 4096;

struct Neighbor {
  Vertex vertex;
  Rational weight;
  double weight_f;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  Rational w;
};

struct VertexSpec {
  std::string id;
  Rational m;
};

// =============================================================================
// WeightedGraph
// =============================================================================

/// Finite measured, weighted graph (V, w, m).
///
/// Weights and measures are held exactly as rationals with a double shadow,
/// so float and exact-rational computations read the same data. Instances
/// are immutable once built.
class WeightedGraph {
 public:
  /// Validates and builds. Throws std::invalid_argument naming the defect:
  /// duplicate vertex, nonpositive measure, negative weight, self loop,
  /// duplicate edge, asymmetric weight entries, unknown vertex.
  static WeightedGraph build(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::string& id(Vertex v) const { return ids_.at(v); }
  Vertex index(std::string_view id) const;
  bool contains(std::string_view id) const;

  std::span<const Neighbor> neighbors(Vertex x) const { return adjacency_.at(x); }
  bool adjacent(Vertex x, Vertex y) const;

  template <class T>
  T measure(Vertex x) const {
    if constexpr (is_exact_v<T>) {
      return measures_.at(x);
    } else {
      return measures_f_.at(x);
    }
  }

  template <class T>
  T weight(Vertex x, Vertex y) const {
    check(x);
    check(y);
    for (const auto& nb : adjacency_[x]) {
      if (nb.vertex == y) {
        if constexpr (is_exact_v<T>) {
          return nb.weight;
        } else {
          return nb.weight_f;
        }
      }
    }
    return T(0);
  }

  /// q(x, y) = w(x, y) / m(x).
  template <class T>
  T rate(Vertex x, Vertex y) const {
    return weight<T>(x, y) / measure<T>(x);
  }

  /// Deg(x) = sum_y q(x, y).
  template <class T>
  T degree(Vertex x) const {
    check(x);
    T sum(0);
    for (const auto& nb : adjacency_[x]) {
      if constexpr (is_exact_v<T>) {
        sum += nb.weight;
      } else {
        sum += nb.weight_f;
      }
    }
    return sum / measure<T>(x);
  }

  template <class T>
  T deg_max() const {
    T best(0);
    for (Vertex x = 0; x < size(); ++x) {
      T d = degree<T>(x);
      if (d > best) best = d;
    }
    return best;
  }

  /// Minimum of q over adjacent ordered pairs. Throws std::domain_error
  /// ("no edges") on an edgeless graph.
  template <class T>
  T q_min() const {
    bool found = false;
    T best(0);
    for (Vertex x = 0; x < size(); ++x) {
      for (const auto& nb : adjacency_[x]) {
        T q = rate<T>(x, nb.vertex);
        if (!found || q < best) best = q;
        found = true;
      }
    }
    if (!found) throw std::domain_error("no edges");
    return best;
  }

  template <class T>
  T total_measure() const {
    T sum(0);
    for (Vertex x = 0; x < size(); ++x) sum += measure<T>(x);
    return sum;
  }

  /// Combinatorial distance, kUnreachable across components.
  std::size_t distance(Vertex x, Vertex y) const;
  /// Breadth-first distances from `source` to every vertex.
  std::vector<std::size_t> distances_from(Vertex source) const;

  /// B_r(x) in increasing index order.
  std::vector<Vertex> ball(Vertex x, std::size_t r) const;
  /// S_r(x) in increasing index order.
  std::vector<Vertex> sphere(Vertex x, std::size_t r) const;

  /// Largest finite distance; kUnreachable when disconnected.
  std::size_t diameter() const;
  bool connected() const;
  /// Component label per vertex, labels numbered from 0 in index order.
  std::vector<std::size_t> components() const;
  std::size_t component_count() const;

  /// Same vertex set and edges with every measure divided by `c` (> 0).
  WeightedGraph with_scaled_measure(const Rational& c) const;

  std::vector<VertexSpec> vertex_specs() const;
  std::vector<EdgeSpec> edge_specs() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  WeightedGraph() = default;
  void check(Vertex x) const;
  void compute_distance_table();

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<Rational> measures_;
  std::vector<double> measures_f_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::size_t edge_count_ = 0;
  // Row-major |V|x|V| table; null above kDistanceCacheLimit.
  std::shared_ptr<const std::vector<std::uint32_t>> distance_table_;
};

// =============================================================================
// Generators
// =============================================================================

enum class Family { Path, Cycle, Complete, Hypercube, Grid, LatticeSegment };

enum class Weighting {
  Unit,        // w = 1, m = 1
  Normalized,  // w = 1, m(x) = combinatorial degree
  DegreeOne,   // w = 1/(2|E|), m(x) = deg(x)/(2|E|): Deg = 1 and m(V) = 1
};

Family parse_family(std::string_view text);
Weighting parse_weighting(std::string_view text);
std::string_view to_string(Family family);
std::string_view to_string(Weighting weighting);

/// Size parameters: path/cycle/complete/lattice take {n}, hypercube {dim},
/// grid {rows, cols}.
WeightedGraph generate(Family family, std::span<const std::size_t> size, Weighting weighting);

/// Parses "cycle:6", "grid:4x4", "hypercube:3", "segment-of-integer-lattice:21".
WeightedGraph generate(std::string_view family_and_size, Weighting weighting);

/// Simple graph on vertices "0".."n-1" with the given edges and weighting.
WeightedGraph from_edge_list(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                             Weighting weighting);

// =============================================================================
// graph-json I/O
// =============================================================================

struct LoadOptions {
  bool require_connected = false;
};

WeightedGraph load_graph(std::istream& in, const LoadOptions& options = {});
WeightedGraph load_graph_string(std::string_view text, const LoadOptions& options = {});
WeightedGraph load_graph_file(const std::string& path, const LoadOptions& options = {});

/// Writes graph-json. Numbers whose shortest decimal reproduces the exact
/// value are written as JSON numbers, others as "p/q" strings, so a reload
/// reproduces the graph exactly.
void save_graph(std::ostream& out, const WeightedGraph& g);
std::string save_graph_string(const WeightedGraph& g);
void save_graph_file(const std::string& path, const WeightedGraph& g);

}  // namespace curvlab

#pragma once

#include "curvlab/graph.hpp"
#include "curvlab/ollivier.hpp"
#include "curvlab/vertex_function.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace curvlab {

/// Gamma(f, h)(x) = 1/2 sum_y q(x, y) (f(y) - f(x)) (h(y) - h(x)).
/// f and h must be defined on B1(x).
template <class T>
T gamma(const WeightedGraph& g, const VertexFunction<T>& f, const VertexFunction<T>& h, Vertex x);

/// Gamma2(f, h)(x) = 1/2 (L Gamma(f, h) - Gamma(f, L h) - Gamma(h, L f))(x).
/// f and h must be defined on B2(x).
template <class T>
T gamma2(const WeightedGraph& g, const VertexFunction<T>& f, const VertexFunction<T>& h, Vertex x);

template <class T>
T gamma2(const WeightedGraph& g, const VertexFunction<T>& f, Vertex x) {
  return gamma2(g, f, f, x);
}

/// Gram matrices of Gamma(.)(x) and Gamma2(.)(x) over functions vanishing
/// at x, in the basis B1(x) \ {x} followed by B2(x) \ B1(x).
struct LocalForms {
  Vertex center = 0;
  std::vector<Vertex> basis;
  std::size_t sphere1 = 0;  // leading basis entries that lie on S1(x)
  Eigen::MatrixXd gamma_matrix;
  Eigen::MatrixXd gamma2_matrix;
};

/// Entries are evaluated exactly in rational arithmetic and then rounded,
/// so both matrices are exactly symmetric.
LocalForms local_forms(const WeightedGraph& g, Vertex x);

/// Eigenvalues of the Gamma form below this are treated as null directions.
inline constexpr double kGammaRangeThreshold = 1e-10;

/// Largest K with Gamma2(f)(x) >= K Gamma(f)(x) for all f (non-normalized,
/// infinite dimension). Throws std::domain_error on an isolated vertex.
double be_curvature(const WeightedGraph& g, Vertex x);
double be_curvature(const LocalForms& forms);

std::vector<double> be_curvatures(const WeightedGraph& g, std::size_t threads = 0);

/// LocalForms as a JSON document (basis ids and both matrices).
std::string local_forms_json(const WeightedGraph& g, const LocalForms& forms);

// =============================================================================
// Counterexample search
// =============================================================================

struct CurvatureProfile {
  WeightedGraph graph;
  std::vector<double> be;               // per vertex
  std::vector<CurvatureReport> pairs;   // all connected pairs x < y
  double min_be = 0.0;
  double min_kappa = 0.0;
};

/// Sign tolerance used when classifying curvatures as negative.
inline constexpr double kSignTolerance = 1e-9;

CurvatureProfile curvature_profile(const WeightedGraph& g, Mode mode = Mode::Float, std::size_t threads = 1);

struct NoImplicationResult {
  /// Some BE curvature < 0 while every pair has kappa >= 0.
  std::optional<CurvatureProfile> be_negative_kappa_nonnegative;
  /// Some pair has kappa < 0 while every BE curvature >= 0.
  std::optional<CurvatureProfile> kappa_negative_be_nonnegative;
  std::size_t examined = 0;
  bool exhausted() const { return !be_negative_kappa_nonnegative || !kappa_negative_be_nonnegative; }
};

/// Scans the catalog in order and keeps the first witness of each kind;
/// stops once both are found. Witness pair tables are recomputed in exact
/// rational mode.
NoImplicationResult counterexample_search(const std::vector<WeightedGraph>& catalog, std::size_t threads = 0);

/// Connected simple graphs with 1..max_vertices vertices, one per
/// isomorphism class, ordered by vertex count, as edge lists on 0..n-1.
struct SmallGraph {
  std::size_t n = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;
};
std::vector<SmallGraph> connected_graphs(std::size_t max_vertices);

/// Exhaustive unit-weighted catalog up to max_vertices, followed by
/// generator families (cycles, paths, complete graphs, hypercube-3, grids).
std::vector<WeightedGraph> search_catalog(std::size_t max_vertices, bool include_families = true);

}  // namespace curvlab

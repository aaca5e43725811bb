#pragma once

#include "curvlab/graph.hpp"
#include "curvlab/lp.hpp"
#include "curvlab/vertex_function.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curvlab {

// =============================================================================
// Transport plans
// =============================================================================

/// Nonnegative coupling rho on B1(x0) x B1(y0). Only the sphere marginals
/// are constrained; rows x0 and column y0 are free.
template <class T>
struct TransportPlan {
  Vertex x0 = 0;
  Vertex y0 = 0;
  std::map<std::pair<Vertex, Vertex>, T> entries;

  T get(Vertex x, Vertex y) const {
    auto it = entries.find({x, y});
    return it == entries.end() ? T(0) : it->second;
  }
};

template <class T>
struct PlanCheck {
  bool feasible = false;
  std::map<Vertex, T> row_residuals;  // x in S1(x0): sum_y rho(x, y) - q(x0, x)
  std::map<Vertex, T> col_residuals;  // y in S1(y0): sum_x rho(x, y) - q(y0, y)
  T max_residual{};
};

/// Marginal residuals. Feasible iff every |residual| <= 1e-9 (float) or is
/// exactly zero (rational) and no entry is negative. Throws
/// std::invalid_argument when an entry lies outside B1(x0) x B1(y0).
template <class T>
PlanCheck<T> verify_plan(const WeightedGraph& g, const TransportPlan<T>& plan);

/// sum rho(x, y) * (1 - d(x, y) / d(x0, y0)).
template <class T>
T plan_value(const WeightedGraph& g, const TransportPlan<T>& plan);

/// Mass on entries with d(x, y) > d0.
template <class T>
T mass_beyond(const WeightedGraph& g, const TransportPlan<T>& plan, std::size_t d0);

// =============================================================================
// Curvature LPs
// =============================================================================

template <class T>
struct PrimalProblem {
  LinearProgram<T> lp;
  std::vector<std::pair<Vertex, Vertex>> cells;  // variable index -> (x, y)
};

template <class T>
struct DualProblem {
  LinearProgram<T> lp;
  std::vector<Vertex> domain;     // B1(x0) u B1(y0)
  std::vector<Vertex> variables;  // domain minus x0 (gauge f(x0) = 0)
};

/// Transport LP: maximize plan_value subject to the sphere marginals.
template <class T>
PrimalProblem<T> build_primal_lp(const WeightedGraph& g, Vertex x0, Vertex y0);

/// Lipschitz LP: minimize (Lf(x0) - Lf(y0)) / d over f on B1(x0) u B1(y0)
/// with f(y0) - f(x0) = d and |f(u) - f(v)| <= d(u, v).
template <class T>
DualProblem<T> build_dual_lp(const WeightedGraph& g, Vertex x0, Vertex y0);

template <class T>
struct PrimalResult {
  T kappa{};
  TransportPlan<T> plan;
};

template <class T>
struct DualResult {
  T kappa{};
  VertexFunction<T> witness;  // defined on B1(x0) u B1(y0), f(x0) = 0
};

/// Throws std::invalid_argument if x0 == y0, std::domain_error if the pair
/// is disconnected.
template <class T>
PrimalResult<T> curvature_primal(const WeightedGraph& g, Vertex x0, Vertex y0);

template <class T>
DualResult<T> curvature_dual(const WeightedGraph& g, Vertex x0, Vertex y0);

/// (Lf(x0) - Lf(y0)) / d(x0, y0) for f defined on B1(x0) u B1(y0).
template <class T>
T dual_objective(const WeightedGraph& g, Vertex x0, Vertex y0, const VertexFunction<T>& f);

// =============================================================================
// Plan surgery
// =============================================================================

/// Neighbors x' of x0 with d(x', y0) = d(x0, y0) - 1, in index order.
std::vector<Vertex> strict_progress_neighbors(const WeightedGraph& g, Vertex x0, Vertex y0);

/// Rewrites an optimal plan so that x' only ships mass to y with
/// d(x', y) < d(x0, y0): the overflow of row x' moves to (x', y0) and the
/// displaced column mass moves to row x0. Checks its preconditions
/// (std::invalid_argument) and its postconditions: marginals, objective not
/// decreased, empty forbidden region (std::logic_error).
template <class T>
TransportPlan<T> plan_surgery(const WeightedGraph& g, Vertex x0, Vertex y0, Vertex x_prime,
                              const TransportPlan<T>& rho0);

template <class T>
struct SurgeryReport {
  Vertex x_prime = 0;
  std::size_t d0 = 0;
  T kappa{};
  T epsilon{};          // max(0, d0 * kappa)
  T q_min{};
  T value_before{};
  T value_after{};
  T forbidden_mass{};   // sum of rho(x', y) with d(x', y) >= d0
  T mass_beyond{};      // after surgery, d(x, y) > d0
  T bound{};            // (q_min - epsilon) / 2
  bool bound_applies = false;  // epsilon < q_min
  bool bound_holds = false;
  TransportPlan<T> before;
  TransportPlan<T> after;
};

/// Solves the transport LP, applies the surgery with x' (or the first
/// strict-progress neighbor) and evaluates the mass bound.
template <class T>
SurgeryReport<T> surgery_check(const WeightedGraph& g, Vertex x0, Vertex y0,
                               std::optional<Vertex> x_prime = std::nullopt);

/// Per-cell change C(x, y) = (rho - rho0)(x, y) * (d0 - d(x, y)) as text,
/// for debugging the optimality argument.
template <class T>
void dump_surgery_terms(std::ostream& out, const WeightedGraph& g, const TransportPlan<T>& rho0,
                        const TransportPlan<T>& rho);

// =============================================================================
// Sweeps
// =============================================================================

enum class Method { Primal, Dual, Both };
Method parse_method(std::string_view text);

struct CurvatureReport {
  Vertex x = 0;
  Vertex y = 0;
  std::size_t d = 0;
  std::optional<double> kappa_primal;
  std::optional<double> kappa_dual;
  std::optional<double> gap;
  std::string exact_primal;  // rational mode only
  std::string exact_dual;
  TransportPlan<double> primal_plan;
  VertexFunction<double> dual_witness;
  std::string error;  // non-empty when this pair failed

  bool ok() const { return error.empty(); }
  double kappa() const { return kappa_primal ? *kappa_primal : kappa_dual.value_or(0.0); }
};

/// Duality gap tolerance in float mode.
inline constexpr double kDualityGapTolerance = 1e-7;

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const WeightedGraph& g);
std::vector<std::pair<Vertex, Vertex>> all_pairs(const WeightedGraph& g);
/// "a,b;c,d" (also accepts whitespace or newlines between pairs).
std::vector<std::pair<Vertex, Vertex>> parse_pair_list(const WeightedGraph& g, std::string_view text);

CurvatureReport curvature_report(const WeightedGraph& g, Vertex x, Vertex y, Mode mode,
                                 Method method = Method::Both);

/// One report per pair, in input order; per-pair failures are recorded in
/// the report and the sweep continues. `threads` = 0 uses CURVLAB_THREADS
/// or the hardware concurrency.
std::vector<CurvatureReport> curvature_sweep(const WeightedGraph& g,
                                             const std::vector<std::pair<Vertex, Vertex>>& pairs, Mode mode,
                                             Method method = Method::Both, std::size_t threads = 0);

struct MinCurvature {
  double value = 0.0;
  Vertex x = 0;
  Vertex y = 0;
  bool any = false;  // false when no connected pair exists
};

/// Minimum primal curvature over connected pairs x < y.
MinCurvature min_curvature(const WeightedGraph& g, Mode mode = Mode::Float, std::size_t threads = 0);

}  // namespace curvlab

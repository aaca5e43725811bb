#pragma once

#include "curvlab/graph.hpp"
#include "curvlab/laplacian.hpp"
#include "curvlab/ollivier.hpp"
#include "curvlab/vertex_function.hpp"

#include <Eigen/Dense>

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace curvlab {

/// Dense matrix of L: L(x, x) = -Deg(x), L(x, y) = q(x, y).
Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g);

/// <f> = sum_x m(x) f(x).
double mean(const WeightedGraph& g, const VertexFunction<double>& f);

/// P_t = exp(tL) through the symmetric matrix S = M^{1/2} L M^{-1/2},
/// S(x, y) = w(x, y) / sqrt(m(x) m(y)). The decomposition is computed once.
class HeatKernel {
 public:
  explicit HeatKernel(const WeightedGraph& g);

  /// Throws std::invalid_argument for t < 0.
  VertexFunction<double> evolve(const VertexFunction<double>& f, double t) const;

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }  // of L, ascending

 private:
  std::size_t n_ = 0;
  Eigen::VectorXd sqrt_m_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

VertexFunction<double> heat_evolve(const WeightedGraph& g, const VertexFunction<double>& f, double t);

// =============================================================================
// Gradient decay
// =============================================================================

inline const std::vector<double> kDefaultTimeGrid{0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0};

/// Slack on the comparison K <= inf kappa.
inline constexpr double kCurvatureSlack = 1e-9;

struct DecayRow {
  double t = 0.0;
  double ratio = 0.0;  // |grad P_t f|_inf / |grad f|_inf
  double bound = 0.0;  // exp(-K t)
  bool pass = false;   // ratio <= bound + 1e-8
};

struct DecayReport {
  double K = 0.0;
  MinCurvature curvature;
  std::vector<DecayRow> rows;
  bool pass = false;
};

/// Throws std::invalid_argument when f is constant, K exceeds the computed
/// curvature infimum, or a time is negative.
DecayReport gradient_decay_check(const WeightedGraph& g, const VertexFunction<double>& f, double K,
                                 const std::vector<double>& times = kDefaultTimeGrid);

/// Same check over several functions with one curvature computation and one
/// heat kernel.
std::vector<DecayReport> gradient_decay_sweep(const WeightedGraph& g, const std::vector<VertexFunction<double>>& fs,
                                              double K, const std::vector<double>& times = kDefaultTimeGrid);

// =============================================================================
// Lipschitz extension and harmonic functions
// =============================================================================

struct LipschitzViolation : std::invalid_argument {
  LipschitzViolation(Vertex u, Vertex v, const std::string& what) : std::invalid_argument(what), u(u), v(v) {}
  Vertex u;
  Vertex v;
};

/// Smallest 1-Lipschitz extension: g(z) = max_w (g0(w) - d(w, z)) over the
/// domain of g0. Throws LipschitzViolation if g0 is not 1-Lipschitz on its
/// domain and std::domain_error if some vertex is unreachable from it.
template <class T>
VertexFunction<T> min_lipschitz_extension(const WeightedGraph& g, const VertexFunction<T>& g0);

/// Extension around a nearly extremal pair: g0(w) = min(f(w), f(x0) - d + d(y0, w))
/// on B1(x0), extended minimally. Expected: g <= f, g(y0) = g(x0) - d,
/// g >= f - eps on B1(x0), g 1-Lipschitz.
template <class T>
struct ExtensionScenario {
  VertexFunction<T> g0;
  VertexFunction<T> g;
  T max_excess{};  // max_z g(z) - f(z)
  T y0_gap{};      // g(y0) - g(x0) + d
  T ball_slack{};  // min over B1(x0) of g - f + eps
  T gradient{};    // |grad g|_inf
  bool holds = false;  // all four within 1e-12 (float) or exactly (rational)
};

/// Requires f total, |grad f|_inf <= 1, eps >= 0 and f(x0) - f(y0) >= d - eps.
template <class T>
ExtensionScenario<T> extension_scenario(const WeightedGraph& g, const VertexFunction<T>& f, Vertex x0, Vertex y0,
                                        const T& eps);

/// max_x |Lf(x)|.
double harmonic_residual(const WeightedGraph& g, const VertexFunction<double>& f);

/// Harmonic function on the complement of the boundary domain with the
/// given boundary values. Throws std::domain_error when an interior vertex
/// cannot reach the boundary.
VertexFunction<double> dirichlet_solve(const WeightedGraph& g, const VertexFunction<double>& boundary);

/// dim ker L, equal to the number of components.
std::size_t laplacian_kernel_dimension(const WeightedGraph& g);

/// i.i.d. uniform values on [-spread, spread], projected to a 1-Lipschitz
/// function by f(x) = min_w f(w) + d(w, x) within each component, then
/// centered so <f> = 0 on probability measures (<f> / m(V) otherwise).
VertexFunction<double> random_lipschitz(const WeightedGraph& g, std::mt19937_64& rng, double spread);

// =============================================================================
// Hypotheses and concentration
// =============================================================================

struct HypothesisReport {
  double deg_max = 0.0;
  std::optional<double> q_min;
  bool connected = false;
  MinCurvature curvature;
  bool met = false;  // connected, q_min > 0, inf kappa >= 0
};

HypothesisReport hypothesis_check(const WeightedGraph& g);

struct ConcentrationReport {
  double K = 0.0;
  double r = 0.0;
  double lambda = 0.0;         // 2 r K
  double tail_mass = 0.0;      // m{f >= r}
  double tail_bound = 0.0;     // exp(-K r^2)
  double laplace_value = 0.0;  // <exp(lambda f)>
  double laplace_bound = 0.0;  // exp(lambda^2 / 4K)
  double chernoff = 0.0;       // exp(-lambda r) <exp(lambda f)>
  double old_bound = 0.0;      // exp(-K^2 r^2)
  bool tail_pass = false;
  bool laplace_pass = false;
  bool chernoff_pass = false;
  bool improves_old = false;   // K <= 1 implies tail_bound <= old_bound
  bool pass = false;
};

/// Throws std::invalid_argument naming the failed precondition: Deg_max <= 1,
/// m(V) = 1, connected, K > 0, K <= inf kappa, <f> = 0, |grad f|_inf <= 1, r > 0.
ConcentrationReport concentration_check(const WeightedGraph& g, const VertexFunction<double>& f, double K, double r);

/// All (f, r) combinations with one curvature computation, grouped by f.
std::vector<ConcentrationReport> concentration_sweep(const WeightedGraph& g,
                                                     const std::vector<VertexFunction<double>>& fs, double K,
                                                     const std::vector<double>& radii);

}  // namespace curvlab

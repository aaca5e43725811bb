#include "curvlab/spectral_heat.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace curvlab {

Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Vertex x = 0; x < g.size(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      const double q = g.rate<double>(x, nb.vertex);
      l(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(nb.vertex)) = q;
      l(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) -= q;
    }
  }
  return l;
}

double mean(const WeightedGraph& g, const VertexFunction<double>& f) {
  f.require_total("mean");
  double sum = 0.0;
  for (Vertex x = 0; x < g.size(); ++x) sum += g.measure<double>(x) * f.at(x);
  return sum;
}

namespace {

Eigen::MatrixXd symmetric_laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Vertex x = 0; x < g.size(); ++x) {
    const auto i = static_cast<Eigen::Index>(x);
    s(i, i) = -g.degree<double>(x);
    for (const auto& nb : g.neighbors(x)) {
      s(i, static_cast<Eigen::Index>(nb.vertex)) =
          nb.weight_f / std::sqrt(g.measure<double>(x) * g.measure<double>(nb.vertex));
    }
  }
  return s;
}

Eigen::VectorXd as_vector(const VertexFunction<double>& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
  for (Vertex x = 0; x < f.size(); ++x) v(static_cast<Eigen::Index>(x)) = f.at(x);
  return v;
}

VertexFunction<double> from_vector(const Eigen::VectorXd& v) {
  return VertexFunction<double>::total(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

HeatKernel::HeatKernel(const WeightedGraph& g) : n_(g.size()) {
  sqrt_m_.resize(static_cast<Eigen::Index>(n_));
  for (Vertex x = 0; x < n_; ++x) sqrt_m_(static_cast<Eigen::Index>(x)) = std::sqrt(g.measure<double>(x));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric_laplacian(g));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

VertexFunction<double> HeatKernel::evolve(const VertexFunction<double>& f, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("heat time must be nonnegative");
  f.require_total("heat_evolve");
  if (f.size() != n_) throw std::invalid_argument("function size does not match the graph");
  if (t == 0.0) return f;
  const Eigen::VectorXd u = sqrt_m_.cwiseProduct(as_vector(f));
  Eigen::VectorXd c = eigenvectors_.transpose() * u;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(t * eigenvalues_(i));
  return from_vector((eigenvectors_ * c).cwiseQuotient(sqrt_m_));
}

VertexFunction<double> heat_evolve(const WeightedGraph& g, const VertexFunction<double>& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat time must be nonnegative");
  return HeatKernel(g).evolve(f, t);
}

// -----------------------------------------------------------------------------
// Gradient decay

namespace {

void require_curvature_bound(const MinCurvature& c, double K) {
  if (c.any && K > c.value + kCurvatureSlack) {
    throw std::invalid_argument("K = " + format_number(K) + " exceeds computed curvature infimum " +
                                format_number(c.value));
  }
}

DecayReport decay_rows(const WeightedGraph& g, const HeatKernel& kernel, const MinCurvature& c,
                       const VertexFunction<double>& f, double K, const std::vector<double>& times) {
  const double base = gradient_sup_norm(g, f);
  if (!(base > 0.0)) throw std::invalid_argument("gradient decay needs a nonconstant function");
  DecayReport report{K, c, {}, true};
  for (double t : times) {
    const auto pt = kernel.evolve(f, t);
    DecayRow row{t, gradient_sup_norm(g, pt) / base, std::exp(-K * t), false};
    row.pass = row.ratio <= row.bound + 1e-8;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

std::vector<DecayReport> gradient_decay_sweep(const WeightedGraph& g, const std::vector<VertexFunction<double>>& fs,
                                              double K, const std::vector<double>& times) {
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat time must be nonnegative");
  }
  for (const auto& f : fs) f.require_total("gradient decay");
  const auto c = min_curvature(g);
  require_curvature_bound(c, K);
  const HeatKernel kernel(g);
  std::vector<DecayReport> out;
  for (const auto& f : fs) out.push_back(decay_rows(g, kernel, c, f, K, times));
  return out;
}

DecayReport gradient_decay_check(const WeightedGraph& g, const VertexFunction<double>& f, double K,
                                 const std::vector<double>& times) {
  return gradient_decay_sweep(g, {f}, K, times).front();
}

// -----------------------------------------------------------------------------
// Lipschitz extension

namespace {

template <class T>
T tolerance() {
  if constexpr (is_exact_v<T>) {
    return T(0);
  } else {
    return 1e-12;
  }
}

template <class T>
T dist(const WeightedGraph& g, Vertex u, Vertex v) {
  return T(static_cast<long>(g.distance(u, v)));
}

}  // namespace

template <class T>
VertexFunction<T> min_lipschitz_extension(const WeightedGraph& g, const VertexFunction<T>& g0) {
  if (g0.size() != g.size()) throw std::invalid_argument("function size does not match the graph");
  const auto support = g0.domain();
  if (support.empty()) throw std::domain_error("extension needs a nonempty domain");
  for (Vertex u : support) {
    for (Vertex v : support) {
      if (u == v || g.distance(u, v) == kUnreachable) continue;
      if (g0.at(u) - g0.at(v) > dist<T>(g, u, v) + tolerance<T>()) {
        throw LipschitzViolation(u, v,
                                 "g0 is not 1-Lipschitz on its domain: pair (" + g.id(u) + ", " + g.id(v) + ")");
      }
    }
  }
  VertexFunction<T> out(g.size());
  for (Vertex z = 0; z < g.size(); ++z) {
    if (g0.has(z)) {
      out.set(z, g0.at(z));
      continue;
    }
    std::optional<T> best;
    for (Vertex w : support) {
      if (g.distance(w, z) == kUnreachable) continue;
      T value = g0.at(w) - dist<T>(g, w, z);
      if (!best || value > *best) best = std::move(value);
    }
    if (!best) throw std::domain_error("vertex '" + g.id(z) + "' is unreachable from the domain");
    out.set(z, std::move(*best));
  }
  return out;
}

template <class T>
ExtensionScenario<T> extension_scenario(const WeightedGraph& g, const VertexFunction<T>& f, Vertex x0, Vertex y0,
                                        const T& eps) {
  f.require_total("extension scenario");
  if (x0 == y0) throw std::invalid_argument("x0 and y0 must differ");
  if (g.distance(x0, y0) == kUnreachable) throw std::domain_error("x0 and y0 are disconnected");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  if (gradient_sup_norm(g, f) > T(1) + tolerance<T>()) throw std::invalid_argument("f is not 1-Lipschitz");
  const T d = dist<T>(g, x0, y0);
  if (f.at(x0) - f.at(y0) < d - eps - tolerance<T>()) {
    throw std::invalid_argument("f(x0) - f(y0) < d(x0, y0) - eps");
  }
  ExtensionScenario<T> s;
  s.g0 = VertexFunction<T>(g.size());
  for (Vertex w : g.ball(x0, 1)) s.g0.set(w, std::min<T>(f.at(w), f.at(x0) - d + dist<T>(g, y0, w)));
  s.g = min_lipschitz_extension(g, s.g0);
  bool first = true;
  for (Vertex z = 0; z < g.size(); ++z) {
    T excess = s.g.at(z) - f.at(z);
    if (first || excess > s.max_excess) s.max_excess = excess;
    first = false;
  }
  s.y0_gap = s.g.at(y0) - s.g.at(x0) + d;
  first = true;
  for (Vertex w : g.ball(x0, 1)) {
    T slack = s.g.at(w) - f.at(w) + eps;
    if (first || slack < s.ball_slack) s.ball_slack = slack;
    first = false;
  }
  s.gradient = gradient_sup_norm(g, s.g);
  const T tol = tolerance<T>();
  s.holds = s.max_excess <= tol && abs_value(s.y0_gap) <= tol && s.ball_slack >= -tol && s.gradient <= T(1) + tol;
  return s;
}

template VertexFunction<double> min_lipschitz_extension(const WeightedGraph&, const VertexFunction<double>&);
template VertexFunction<Rational> min_lipschitz_extension(const WeightedGraph&, const VertexFunction<Rational>&);
template ExtensionScenario<double> extension_scenario(const WeightedGraph&, const VertexFunction<double>&, Vertex,
                                                      Vertex, const double&);
template ExtensionScenario<Rational> extension_scenario(const WeightedGraph&, const VertexFunction<Rational>&,
                                                        Vertex, Vertex, const Rational&);

// -----------------------------------------------------------------------------
// Harmonic functions

double harmonic_residual(const WeightedGraph& g, const VertexFunction<double>& f) {
  return sup_norm(laplacian_apply(g, f));
}

VertexFunction<double> dirichlet_solve(const WeightedGraph& g, const VertexFunction<double>& boundary) {
  if (boundary.size() != g.size()) throw std::invalid_argument("function size does not match the graph");
  const auto fixed = boundary.domain();
  if (fixed.empty()) throw std::invalid_argument("dirichlet_solve needs a nonempty boundary");

  std::vector<bool> reached(g.size(), false);
  std::deque<Vertex> queue(fixed.begin(), fixed.end());
  for (Vertex b : fixed) reached[b] = true;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(x)) {
      if (!reached[nb.vertex]) {
        reached[nb.vertex] = true;
        queue.push_back(nb.vertex);
      }
    }
  }
  std::vector<Eigen::Index> slot(g.size(), -1);
  Eigen::Index k = 0;
  for (Vertex x = 0; x < g.size(); ++x) {
    if (boundary.has(x)) continue;
    if (!reached[x]) throw std::domain_error("interior vertex '" + g.id(x) + "' is disconnected from the boundary");
    slot[x] = k++;
  }

  VertexFunction<double> out(g.size());
  for (Vertex b : fixed) out.set(b, boundary.at(b));
  if (k == 0) return out;
  // Rows scaled by m(x): sum_y w(x, y) (f(x) - f(y)) = 0 is symmetric positive definite.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  for (Vertex x = 0; x < g.size(); ++x) {
    if (slot[x] < 0) continue;
    for (const auto& nb : g.neighbors(x)) {
      a(slot[x], slot[x]) += nb.weight_f;
      if (slot[nb.vertex] >= 0) {
        a(slot[x], slot[nb.vertex]) -= nb.weight_f;
      } else {
        rhs(slot[x]) += nb.weight_f * boundary.at(nb.vertex);
      }
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const Eigen::VectorXd sol = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("dirichlet system is singular");
  for (Vertex x = 0; x < g.size(); ++x) {
    if (slot[x] >= 0) out.set(x, sol(slot[x]));
  }
  return out;
}

std::size_t laplacian_kernel_dimension(const WeightedGraph& g) {
  if (g.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric_laplacian(g), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= 1e-9 * scale) ++count;
  }
  return count;
}

VertexFunction<double> random_lipschitz(const WeightedGraph& g, std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> draw(-spread, spread);
  std::vector<double> raw(g.size());
  for (auto& v : raw) v = draw(rng);
  std::vector<double> f(g.size());
  for (Vertex x = 0; x < g.size(); ++x) {
    double best = raw[x];
    for (Vertex w = 0; w < g.size(); ++w) {
      const std::size_t d = g.distance(w, x);
      if (d != kUnreachable) best = std::min(best, raw[w] + static_cast<double>(d));
    }
    f[x] = best;
  }
  double avg = 0.0;
  for (Vertex x = 0; x < g.size(); ++x) avg += g.measure<double>(x) * f[x];
  avg /= g.total_measure<double>();
  for (auto& v : f) v -= avg;
  return VertexFunction<double>::total(std::move(f));
}

// -----------------------------------------------------------------------------
// Hypotheses

HypothesisReport hypothesis_check(const WeightedGraph& g) {
  HypothesisReport r;
  r.deg_max = g.deg_max<double>();
  if (g.edge_count() > 0) r.q_min = g.q_min<double>();
  r.connected = g.connected();
  r.curvature = min_curvature(g);
  r.met = r.connected && r.q_min && *r.q_min > 0.0 && r.curvature.any && r.curvature.value >= -1e-9;
  return r;
}

}  // namespace curvlab

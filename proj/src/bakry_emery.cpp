#include "curvlab/bakry_emery.hpp"

#include "curvlab/laplacian.hpp"
#include "curvlab/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace curvlab {

template <class T>
T gamma(const WeightedGraph& g, const VertexFunction<T>& f, const VertexFunction<T>& h, Vertex x) {
  T sum(0);
  const T& fx = f.at(x);
  const T& hx = h.at(x);
  for (const auto& nb : g.neighbors(x)) {
    sum += g.rate<T>(x, nb.vertex) * (f.at(nb.vertex) - fx) * (h.at(nb.vertex) - hx);
  }
  return sum / T(2);
}

template <class T>
T gamma2(const WeightedGraph& g, const VertexFunction<T>& f, const VertexFunction<T>& h, Vertex x) {
  VertexFunction<T> lf(g.size()), lh(g.size());
  for (Vertex z : g.ball(x, 1)) {
    lf.set(z, laplacian_at(g, f, z));
    lh.set(z, laplacian_at(g, h, z));
  }
  const T gx = gamma(g, f, h, x);
  T lgamma(0);
  for (const auto& nb : g.neighbors(x)) lgamma += g.rate<T>(x, nb.vertex) * (gamma(g, f, h, nb.vertex) - gx);
  return (lgamma - gamma(g, f, lh, x) - gamma(g, h, lf, x)) / T(2);
}

template double gamma(const WeightedGraph&, const VertexFunction<double>&, const VertexFunction<double>&, Vertex);
template Rational gamma(const WeightedGraph&, const VertexFunction<Rational>&, const VertexFunction<Rational>&,
                        Vertex);
template double gamma2(const WeightedGraph&, const VertexFunction<double>&, const VertexFunction<double>&, Vertex);
template Rational gamma2(const WeightedGraph&, const VertexFunction<Rational>&, const VertexFunction<Rational>&,
                         Vertex);

LocalForms local_forms(const WeightedGraph& g, Vertex x) {
  if (g.neighbors(x).empty()) throw std::domain_error("isolated vertex '" + g.id(x) + "'");
  LocalForms forms;
  forms.center = x;
  const auto s1 = g.sphere(x, 1);
  const auto s2 = g.sphere(x, 2);
  forms.sphere1 = s1.size();
  forms.basis = s1;
  forms.basis.insert(forms.basis.end(), s2.begin(), s2.end());
  const std::size_t k = forms.basis.size();
  const auto ball1 = g.ball(x, 1);
  const auto ball2 = g.ball(x, 2);

  std::vector<VertexFunction<Rational>> e(k), le(k);
  for (std::size_t i = 0; i < k; ++i) {
    e[i] = VertexFunction<Rational>(g.size());
    for (Vertex z : ball2) e[i].set(z, Rational(z == forms.basis[i] ? 1 : 0));
    le[i] = VertexFunction<Rational>(g.size());
    for (Vertex z : ball1) le[i].set(z, laplacian_at(g, e[i], z));
  }

  forms.gamma_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  forms.gamma2_matrix = forms.gamma_matrix;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const Rational gx = gamma(g, e[i], e[j], x);
      Rational lgamma(0);
      for (const auto& nb : g.neighbors(x)) {
        lgamma += g.rate<Rational>(x, nb.vertex) * (gamma(g, e[i], e[j], nb.vertex) - gx);
      }
      const Rational g2 = (lgamma - gamma(g, e[i], le[j], x) - gamma(g, e[j], le[i], x)) / 2;
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      forms.gamma_matrix(a, b) = forms.gamma_matrix(b, a) = to_double(gx);
      forms.gamma2_matrix(a, b) = forms.gamma2_matrix(b, a) = to_double(g2);
    }
  }
  return forms;
}

double be_curvature(const LocalForms& forms) {
  const auto a = static_cast<Eigen::Index>(forms.sphere1);
  const auto k = static_cast<Eigen::Index>(forms.basis.size());
  const auto b = k - a;
  if (a == 0) throw std::domain_error("isolated vertex");
  const Eigen::MatrixXd& m = forms.gamma2_matrix;
  // Minimizing over the S2 coordinates leaves the Schur complement.
  Eigen::MatrixXd reduced = m.topLeftCorner(a, a);
  if (b > 0) {
    const Eigen::MatrixXd mbb = m.bottomRightCorner(b, b);
    const Eigen::MatrixXd mba = m.bottomLeftCorner(b, a);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(mbb);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw std::runtime_error("outer block of the Gamma2 form is not positive definite");
    }
    reduced -= mba.transpose() * ldlt.solve(mba);
  }
  reduced = (reduced + reduced.transpose()) / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(forms.gamma_matrix.topLeftCorner(a, a));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < a; ++i) {
    if (gram.eigenvalues()(i) > kGammaRangeThreshold) keep.push_back(i);
  }
  if (keep.empty()) throw std::domain_error("Gamma form vanishes");
  Eigen::MatrixXd w(a, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    w.col(static_cast<Eigen::Index>(c)) = gram.eigenvectors().col(keep[c]) / std::sqrt(gram.eigenvalues()(keep[c]));
  }
  Eigen::MatrixXd pencil = w.transpose() * reduced * w;
  pencil = (pencil + pencil.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pencil, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double be_curvature(const WeightedGraph& g, Vertex x) { return be_curvature(local_forms(g, x)); }

std::vector<double> be_curvatures(const WeightedGraph& g, std::size_t threads) {
  std::vector<double> out(g.size());
  parallel_for(g.size(), threads, [&](std::size_t i) { out[i] = be_curvature(g, i); });
  return out;
}

std::string local_forms_json(const WeightedGraph& g, const LocalForms& forms) {
  using nlohmann::json;
  auto matrix = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json doc;
  doc["vertex"] = g.id(forms.center);
  json basis = json::array();
  for (Vertex v : forms.basis) basis.push_back(g.id(v));
  doc["basis"] = std::move(basis);
  doc["sphere1"] = forms.sphere1;
  doc["gamma"] = matrix(forms.gamma_matrix);
  doc["gamma2"] = matrix(forms.gamma2_matrix);
  return doc.dump(1);
}

CurvatureProfile curvature_profile(const WeightedGraph& g, Mode mode, std::size_t threads) {
  CurvatureProfile p{g, be_curvatures(g, threads), {}, 0.0, 0.0};
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (auto [x, y] : all_pairs(g)) {
    if (g.distance(x, y) != kUnreachable) pairs.emplace_back(x, y);
  }
  p.pairs = curvature_sweep(g, pairs, mode, Method::Primal, threads);
  p.min_be = p.be.empty() ? 0.0 : *std::min_element(p.be.begin(), p.be.end());
  bool first = true;
  for (const auto& r : p.pairs) {
    if (!r.ok()) throw std::runtime_error(r.error);
    if (first || r.kappa() < p.min_kappa) p.min_kappa = r.kappa();
    first = false;
  }
  return p;
}

NoImplicationResult counterexample_search(const std::vector<WeightedGraph>& catalog, std::size_t threads) {
  NoImplicationResult result;
  for (const auto& g : catalog) {
    if (result.be_negative_kappa_nonnegative && result.kappa_negative_be_nonnegative) break;
    ++result.examined;
    if (g.size() < 2 || !g.connected()) continue;
    const auto p = curvature_profile(g, Mode::Float, threads);
    const bool be_neg = p.min_be < -kSignTolerance, be_nonneg = p.min_be >= -kSignTolerance;
    const bool k_neg = p.min_kappa < -kSignTolerance, k_nonneg = p.min_kappa >= -kSignTolerance;
    if (!result.be_negative_kappa_nonnegative && be_neg && k_nonneg) {
      result.be_negative_kappa_nonnegative = curvature_profile(g, Mode::Exact, threads);
    }
    if (!result.kappa_negative_be_nonnegative && k_neg && be_nonneg) {
      result.kappa_negative_be_nonnegative = curvature_profile(g, Mode::Exact, threads);
    }
  }
  return result;
}

std::vector<WeightedGraph> search_catalog(std::size_t max_vertices, bool include_families) {
  std::vector<WeightedGraph> out;
  for (const auto& s : connected_graphs(max_vertices)) {
    if (s.n < 2) continue;
    out.push_back(from_edge_list(s.n, s.edges, Weighting::Unit));
  }
  if (include_families) {
    for (const char* name : {"cycle:8", "cycle:9", "cycle:10", "path:8", "complete:8", "hypercube:3", "grid:3x3",
                             "grid:3x4", "grid:4x4"}) {
      out.push_back(generate(name, Weighting::Unit));
    }
  }
  return out;
}

}  // namespace curvlab

#include "curvlab/ollivier.hpp"
#include "curvlab/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace curvlab {

namespace {

std::size_t checked_distance(const WeightedGraph& g, Vertex x0, Vertex y0) {
  if (x0 == y0) throw std::invalid_argument("curvature needs distinct vertices (x0 = y0 = '" + g.id(x0) + "')");
  const std::size_t d = g.distance(x0, y0);
  if (d == kUnreachable) {
    throw std::domain_error("disconnected pair '" + g.id(x0) + "', '" + g.id(y0) + "'");
  }
  return d;
}

template <class T>
T slack(double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return T(0);
  } else {
    return tol;
  }
}

template <class T>
T laplacian_at(const WeightedGraph& g, const VertexFunction<T>& f, Vertex z) {
  T sum(0);
  const T fz = f.at(z);
  for (const auto& nb : g.neighbors(z)) sum += g.rate<T>(z, nb.vertex) * (f.at(nb.vertex) - fz);
  return sum;
}

}  // namespace

// =============================================================================
// Plans
// =============================================================================

template <class T>
PlanCheck<T> verify_plan(const WeightedGraph& g, const TransportPlan<T>& plan) {
  const Vertex x0 = plan.x0;
  const Vertex y0 = plan.y0;
  checked_distance(g, x0, y0);
  PlanCheck<T> out;
  bool nonnegative = true;
  for (const auto& [cell, rho] : plan.entries) {
    if (g.distance(x0, cell.first) > 1 || g.distance(y0, cell.second) > 1) {
      throw std::invalid_argument("plan entry ('" + g.id(cell.first) + "', '" + g.id(cell.second) +
                                  "') lies outside B1(x0) x B1(y0)");
    }
    if (rho < 0) nonnegative = false;
  }
  for (Vertex x : g.sphere(x0, 1)) {
    T sum(0);
    for (Vertex y : g.ball(y0, 1)) sum += plan.get(x, y);
    out.row_residuals[x] = sum - g.rate<T>(x0, x);
  }
  for (Vertex y : g.sphere(y0, 1)) {
    T sum(0);
    for (Vertex x : g.ball(x0, 1)) sum += plan.get(x, y);
    out.col_residuals[y] = sum - g.rate<T>(y0, y);
  }
  out.max_residual = T(0);
  for (const auto* residuals : {&out.row_residuals, &out.col_residuals}) {
    for (const auto& [v, r] : *residuals) {
      T a = abs_value(r);
      if (a > out.max_residual) out.max_residual = a;
    }
  }
  out.feasible = nonnegative && out.max_residual <= slack<T>(Tolerance<double>::feasibility);
  return out;
}

template <class T>
T plan_value(const WeightedGraph& g, const TransportPlan<T>& plan) {
  const std::size_t d0 = checked_distance(g, plan.x0, plan.y0);
  const T denom(static_cast<long>(d0));
  T value(0);
  for (const auto& [cell, rho] : plan.entries) {
    const long diff = static_cast<long>(d0) - static_cast<long>(g.distance(cell.first, cell.second));
    if (diff != 0) value += rho * T(diff) / denom;
  }
  return value;
}

template <class T>
T mass_beyond(const WeightedGraph& g, const TransportPlan<T>& plan, std::size_t d0) {
  T sum(0);
  for (const auto& [cell, rho] : plan.entries) {
    if (g.distance(cell.first, cell.second) > d0) sum += rho;
  }
  return sum;
}

// =============================================================================
// LPs
// =============================================================================

template <class T>
PrimalProblem<T> build_primal_lp(const WeightedGraph& g, Vertex x0, Vertex y0) {
  const std::size_t d0 = checked_distance(g, x0, y0);
  const auto rows = g.ball(x0, 1);
  const auto cols = g.ball(y0, 1);
  PrimalProblem<T> out;
  out.lp.sense = Sense::Maximize;
  std::map<std::pair<Vertex, Vertex>, std::size_t> var;
  const T denom(static_cast<long>(d0));
  for (Vertex x : rows) {
    for (Vertex y : cols) {
      const long diff = static_cast<long>(d0) - static_cast<long>(g.distance(x, y));
      var[{x, y}] = out.lp.add_variable(T(diff) / denom, false, std::nullopt, g.id(x) + "->" + g.id(y));
      out.cells.emplace_back(x, y);
    }
  }
  for (Vertex x : rows) {
    if (x == x0) continue;
    std::vector<std::pair<std::size_t, T>> terms;
    for (Vertex y : cols) terms.emplace_back(var.at({x, y}), T(1));
    out.lp.add_constraint(std::move(terms), Relation::Equal, g.rate<T>(x0, x));
  }
  for (Vertex y : cols) {
    if (y == y0) continue;
    std::vector<std::pair<std::size_t, T>> terms;
    for (Vertex x : rows) terms.emplace_back(var.at({x, y}), T(1));
    out.lp.add_constraint(std::move(terms), Relation::Equal, g.rate<T>(y0, y));
  }
  return out;
}

template <class T>
DualProblem<T> build_dual_lp(const WeightedGraph& g, Vertex x0, Vertex y0) {
  const std::size_t d0 = checked_distance(g, x0, y0);
  DualProblem<T> out;
  {
    auto a = g.ball(x0, 1);
    auto b = g.ball(y0, 1);
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.domain));
  }
  // Gauge: f(x0) = 0, so x0 carries no variable.
  std::map<Vertex, std::size_t> var;
  out.lp.sense = Sense::Minimize;
  for (Vertex z : out.domain) {
    if (z == x0) continue;
    var[z] = out.lp.add_variable(T(0), true, std::nullopt, "f(" + g.id(z) + ")");
    out.variables.push_back(z);
  }
  const T denom(static_cast<long>(d0));
  // d0 * objective = sum_y q(x0,y) f(y) - sum_y q(y0,y) (f(y) - f(y0)).
  for (const auto& nb : g.neighbors(x0)) {
    out.lp.objective[var.at(nb.vertex)] += g.rate<T>(x0, nb.vertex) / denom;
  }
  for (const auto& nb : g.neighbors(y0)) {
    const T q = g.rate<T>(y0, nb.vertex) / denom;
    if (nb.vertex != x0) out.lp.objective[var.at(nb.vertex)] -= q;
    out.lp.objective[var.at(y0)] += q;
  }
  out.lp.add_constraint({{var.at(y0), T(1)}}, Relation::Equal, denom);

  // |f(u) - f(v)| <= d(u, v). A pair with a geodesic through another domain
  // vertex is implied by the two shorter constraints and is skipped.
  const auto& dom = out.domain;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    for (std::size_t j = i + 1; j < dom.size(); ++j) {
      const Vertex u = dom[i];
      const Vertex v = dom[j];
      const std::size_t duv = g.distance(u, v);
      bool implied = false;
      for (Vertex w : dom) {
        if (w == u || w == v) continue;
        if (g.distance(u, w) + g.distance(w, v) == duv) {
          implied = true;
          break;
        }
      }
      if (implied) continue;
      const T bound(static_cast<long>(duv));
      for (int sign : {1, -1}) {
        std::vector<std::pair<std::size_t, T>> terms;
        if (u != x0) terms.emplace_back(var.at(u), T(sign));
        if (v != x0) terms.emplace_back(var.at(v), T(-sign));
        out.lp.add_constraint(std::move(terms), Relation::LessEqual, bound);
      }
    }
  }
  return out;
}

template <class T>
PrimalResult<T> curvature_primal(const WeightedGraph& g, Vertex x0, Vertex y0) {
  const auto problem = build_primal_lp<T>(g, x0, y0);
  const auto sol = solve(problem.lp);
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("transport LP for ('" + g.id(x0) + "', '" + g.id(y0) + "') is " +
                             std::string(to_string(sol.status)));
  }
  PrimalResult<T> out;
  out.kappa = sol.value;
  out.plan.x0 = x0;
  out.plan.y0 = y0;
  for (std::size_t k = 0; k < problem.cells.size(); ++k) {
    T rho = sol.assignment[k];
    if constexpr (!is_exact_v<T>) {
      if (rho < 0) rho = 0;  // clamp round-off
    }
    out.plan.entries[problem.cells[k]] = rho;
  }
  return out;
}

template <class T>
DualResult<T> curvature_dual(const WeightedGraph& g, Vertex x0, Vertex y0) {
  const auto problem = build_dual_lp<T>(g, x0, y0);
  const auto sol = solve(problem.lp);
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("Lipschitz LP for ('" + g.id(x0) + "', '" + g.id(y0) + "') is " +
                             std::string(to_string(sol.status)));
  }
  DualResult<T> out;
  out.kappa = sol.value;
  out.witness = VertexFunction<T>(g.size());
  out.witness.set(x0, T(0));
  for (std::size_t k = 0; k < problem.variables.size(); ++k) out.witness.set(problem.variables[k], sol.assignment[k]);
  return out;
}

template <class T>
T dual_objective(const WeightedGraph& g, Vertex x0, Vertex y0, const VertexFunction<T>& f) {
  const std::size_t d0 = checked_distance(g, x0, y0);
  return (laplacian_at(g, f, x0) - laplacian_at(g, f, y0)) / T(static_cast<long>(d0));
}

// =============================================================================
// Surgery
// =============================================================================

std::vector<Vertex> strict_progress_neighbors(const WeightedGraph& g, Vertex x0, Vertex y0) {
  const std::size_t d0 = checked_distance(g, x0, y0);
  std::vector<Vertex> out;
  for (const auto& nb : g.neighbors(x0)) {
    if (g.distance(nb.vertex, y0) + 1 == d0) out.push_back(nb.vertex);
  }
  return out;
}

template <class T>
TransportPlan<T> plan_surgery(const WeightedGraph& g, Vertex x0, Vertex y0, Vertex x_prime,
                              const TransportPlan<T>& rho0) {
  const std::size_t d0 = checked_distance(g, x0, y0);
  if (rho0.x0 != x0 || rho0.y0 != y0) throw std::invalid_argument("plan belongs to a different pair");
  if (!g.adjacent(x0, x_prime) || g.distance(x_prime, y0) + 1 != d0) {
    throw std::invalid_argument("'" + g.id(x_prime) + "' is not a neighbor of '" + g.id(x0) +
                                "' one step closer to '" + g.id(y0) + "'");
  }
  const T tol = slack<T>(Tolerance<double>::optimality);
  const auto check0 = verify_plan(g, rho0);
  if (!check0.feasible) throw std::invalid_argument("input plan violates the marginal constraints");
  const T value0 = plan_value(g, rho0);
  const T best = curvature_primal<T>(g, x0, y0).kappa;
  if (value0 < best - tol) throw std::invalid_argument("input plan is not optimal");

  const auto cols = g.ball(y0, 1);
  TransportPlan<T> rho = rho0;
  for (Vertex x : g.ball(x0, 1)) {
    for (Vertex y : cols) rho.entries.try_emplace({x, y}, T(0));
  }
  T overflow(0);
  for (Vertex y : cols) {
    if (g.distance(x_prime, y) < d0) continue;
    const T moved = rho0.get(x_prime, y);
    overflow += moved;
    rho.entries[{x_prime, y}] = T(0);
    rho.entries[{x0, y}] = rho0.get(x0, y) + moved;
  }
  rho.entries[{x_prime, y0}] = rho0.get(x_prime, y0) + overflow;

  const auto check = verify_plan(g, rho);
  if (!check.feasible) throw std::logic_error("surgery broke the marginal constraints");
  if (plan_value(g, rho) < value0 - tol) throw std::logic_error("surgery decreased the objective");
  for (Vertex y : cols) {
    if (g.distance(x_prime, y) >= d0 && rho.get(x_prime, y) != 0) {
      throw std::logic_error("surgery left mass in the forbidden region");
    }
  }
  return rho;
}

template <class T>
SurgeryReport<T> surgery_check(const WeightedGraph& g, Vertex x0, Vertex y0, std::optional<Vertex> x_prime) {
  SurgeryReport<T> out;
  out.d0 = checked_distance(g, x0, y0);
  if (!x_prime) {
    const auto candidates = strict_progress_neighbors(g, x0, y0);
    if (candidates.empty()) {
      throw std::invalid_argument("no strict-progress neighbor of '" + g.id(x0) + "' toward '" + g.id(y0) + "'");
    }
    x_prime = candidates.front();
  }
  out.x_prime = *x_prime;
  auto primal = curvature_primal<T>(g, x0, y0);
  out.kappa = primal.kappa;
  out.before = std::move(primal.plan);
  out.after = plan_surgery(g, x0, y0, out.x_prime, out.before);
  const T d0(static_cast<long>(out.d0));
  out.epsilon = d0 * out.kappa > 0 ? T(d0 * out.kappa) : T(0);
  out.q_min = g.q_min<T>();
  out.value_before = plan_value(g, out.before);
  out.value_after = plan_value(g, out.after);
  out.forbidden_mass = T(0);
  for (const auto& [cell, rho] : out.after.entries) {
    if (cell.first == out.x_prime && g.distance(cell.first, cell.second) >= out.d0) out.forbidden_mass += rho;
  }
  out.mass_beyond = mass_beyond(g, out.after, out.d0);
  out.bound = (out.q_min - out.epsilon) / T(2);
  out.bound_applies = out.epsilon < out.q_min;
  out.bound_holds = !out.bound_applies || out.mass_beyond >= out.bound - slack<T>(1e-9);
  return out;
}

template <class T>
void dump_surgery_terms(std::ostream& out, const WeightedGraph& g, const TransportPlan<T>& rho0,
                        const TransportPlan<T>& rho) {
  const std::size_t d0 = checked_distance(g, rho0.x0, rho0.y0);
  T total(0);
  for (Vertex x : g.ball(rho0.x0, 1)) {
    for (Vertex y : g.ball(rho0.y0, 1)) {
      const T change = rho.get(x, y) - rho0.get(x, y);
      if (change == 0) continue;
      const long diff = static_cast<long>(d0) - static_cast<long>(g.distance(x, y));
      const T c = change * T(diff);
      total += c;
      out << "C " << g.id(x) << ' ' << g.id(y) << ' ';
      if constexpr (is_exact_v<T>) {
        out << rational_to_string(c);
      } else {
        out << format_number(c);
      }
      out << '\n';
    }
  }
  out << "sum ";
  if constexpr (is_exact_v<T>) {
    out << rational_to_string(total);
  } else {
    out << format_number(total);
  }
  out << '\n';
}

// =============================================================================
// Sweeps
// =============================================================================

Method parse_method(std::string_view text) {
  if (text == "primal") return Method::Primal;
  if (text == "dual") return Method::Dual;
  if (text == "both") return Method::Both;
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const WeightedGraph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex x = 0; x < g.size(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      if (x < nb.vertex) out.emplace_back(x, nb.vertex);
    }
  }
  return out;
}

std::vector<std::pair<Vertex, Vertex>> all_pairs(const WeightedGraph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex x = 0; x < g.size(); ++x) {
    for (Vertex y = x + 1; y < g.size(); ++y) out.emplace_back(x, y);
  }
  return out;
}

std::vector<std::pair<Vertex, Vertex>> parse_pair_list(const WeightedGraph& g, std::string_view text) {
  std::vector<std::pair<Vertex, Vertex>> out;
  std::string item;
  auto flush = [&] {
    if (item.empty()) return;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed pair '" + item + "' (expected x,y)");
    out.emplace_back(g.index(item.substr(0, comma)), g.index(item.substr(comma + 1)));
    item.clear();
  };
  for (char c : text) {
    if (c == ';' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      item.push_back(c);
    }
  }
  flush();
  return out;
}

namespace {

template <class T>
void fill_report(const WeightedGraph& g, CurvatureReport& r, Method method) {
  std::optional<T> primal;
  std::optional<T> dual;
  if (method != Method::Dual) {
    auto res = curvature_primal<T>(g, r.x, r.y);
    primal = res.kappa;
    r.kappa_primal = to_double(res.kappa);
    for (const auto& [cell, rho] : res.plan.entries) r.primal_plan.entries[cell] = to_double(rho);
  }
  if (method != Method::Primal) {
    auto res = curvature_dual<T>(g, r.x, r.y);
    dual = res.kappa;
    r.kappa_dual = to_double(res.kappa);
    r.dual_witness = to_double(res.witness);
  }
  if constexpr (is_exact_v<T>) {
    if (primal) r.exact_primal = rational_to_string(*primal);
    if (dual) r.exact_dual = rational_to_string(*dual);
  }
  if (primal && dual) r.gap = to_double(abs_value(T(*primal - *dual)));
}

}  // namespace

CurvatureReport curvature_report(const WeightedGraph& g, Vertex x, Vertex y, Mode mode, Method method) {
  CurvatureReport r;
  r.x = x;
  r.y = y;
  r.primal_plan.x0 = x;
  r.primal_plan.y0 = y;
  try {
    r.d = checked_distance(g, x, y);
    if (mode == Mode::Exact) {
      fill_report<Rational>(g, r, method);
    } else {
      fill_report<double>(g, r, method);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<CurvatureReport> curvature_sweep(const WeightedGraph& g,
                                             const std::vector<std::pair<Vertex, Vertex>>& pairs, Mode mode,
                                             Method method, std::size_t threads) {
  std::vector<CurvatureReport> out(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    out[i] = curvature_report(g, pairs[i].first, pairs[i].second, mode, method);
  });
  return out;
}

MinCurvature min_curvature(const WeightedGraph& g, Mode mode, std::size_t threads) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (auto [x, y] : all_pairs(g)) {
    if (g.distance(x, y) != kUnreachable) pairs.emplace_back(x, y);
  }
  const auto reports = curvature_sweep(g, pairs, mode, Method::Primal, threads);
  MinCurvature out;
  for (const auto& r : reports) {
    if (!r.ok()) throw std::runtime_error(r.error);
    if (!out.any || *r.kappa_primal < out.value) {
      out.value = *r.kappa_primal;
      out.x = r.x;
      out.y = r.y;
      out.any = true;
    }
  }
  return out;
}

#define CURVLAB_INSTANTIATE(T)                                                                         \
  template PlanCheck<T> verify_plan(const WeightedGraph&, const TransportPlan<T>&);                    \
  template T plan_value(const WeightedGraph&, const TransportPlan<T>&);                                \
  template T mass_beyond(const WeightedGraph&, const TransportPlan<T>&, std::size_t);                  \
  template PrimalProblem<T> build_primal_lp(const WeightedGraph&, Vertex, Vertex);                     \
  template DualProblem<T> build_dual_lp(const WeightedGraph&, Vertex, Vertex);                         \
  template PrimalResult<T> curvature_primal(const WeightedGraph&, Vertex, Vertex);                     \
  template DualResult<T> curvature_dual(const WeightedGraph&, Vertex, Vertex);                         \
  template T dual_objective(const WeightedGraph&, Vertex, Vertex, const VertexFunction<T>&);           \
  template TransportPlan<T> plan_surgery(const WeightedGraph&, Vertex, Vertex, Vertex,                 \
                                         const TransportPlan<T>&);                                     \
  template SurgeryReport<T> surgery_check(const WeightedGraph&, Vertex, Vertex, std::optional<Vertex>); \
  template void dump_surgery_terms(std::ostream&, const WeightedGraph&, const TransportPlan<T>&,        \
                                   const TransportPlan<T>&);

CURVLAB_INSTANTIATE(double)
CURVLAB_INSTANTIATE(Rational)

#undef CURVLAB_INSTANTIATE

}  // namespace curvlab

#include "curvlab/lp.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace curvlab {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr std::size_t kFloatPivotLimit = 200000;

template <class T>
bool is_finite(const T& v) {
  if constexpr (is_exact_v<T>) {
    (void)v;
    return true;
  } else {
    return std::isfinite(v);
  }
}

template <class T>
bool above(const T& v, double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return v > 0;
  } else {
    return v > tol;
  }
}

template <class T>
bool nonzero(const T& v, double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return v != 0;
  } else {
    return std::abs(v) > tol;
  }
}

template <class T>
void validate(const LinearProgram<T>& lp) {
  const std::size_t n = lp.variables.size();
  if (lp.objective.size() != n) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(lp.objective.size()) +
                                " objective coefficients for " + std::to_string(n) + " variables");
  }
  for (const auto& c : lp.objective) {
    if (!is_finite(c)) throw std::invalid_argument("non-finite objective coefficient");
  }
  for (const auto& v : lp.variables) {
    if (v.upper && !is_finite(*v.upper)) throw std::invalid_argument("non-finite upper bound");
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& row = lp.constraints[i];
    if (!is_finite(row.rhs)) throw std::invalid_argument("non-finite right-hand side in row " + std::to_string(i));
    for (const auto& [j, a] : row.terms) {
      if (j >= n) {
        throw std::invalid_argument("dimension mismatch: row " + std::to_string(i) + " references variable " +
                                    std::to_string(j) + " of " + std::to_string(n));
      }
      if (!is_finite(a)) throw std::invalid_argument("non-finite coefficient in row " + std::to_string(i));
    }
  }
}

// Dense tableau over columns [structural | slack | artificial | rhs]; the
// last row holds reduced costs c_j - z_j and -z in the rhs cell.
template <class T>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1)) {}

  T& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  const T& at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  T& rhs(std::size_t r) { return at(r, cols_); }
  T& cost(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t e, double tol) {
    const T inv = T(1) / at(r, e);
    nz_.clear();
    for (std::size_t c = 0; c <= cols_; ++c) {
      T& v = at(r, c);
      if (v != 0) {
        v *= inv;
        nz_.push_back(c);
      }
    }
    at(r, e) = T(1);
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const T factor = at(i, e);
      if (!nonzero(factor, 0.0)) continue;
      for (std::size_t c : nz_) at(i, c) -= factor * at(r, c);
      at(i, e) = T(0);
      if constexpr (!is_exact_v<T>) {
        // Flush round-off so that tolerance tests see clean zeros.
        for (std::size_t c : nz_) {
          if (std::abs(at(i, c)) < tol * 1e-3) at(i, c) = 0;
        }
      }
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> cells_;
  std::vector<std::size_t> nz_;
};

}  // namespace

template <class T>
T objective_value(const LinearProgram<T>& lp, const std::vector<T>& x) {
  T value(0);
  for (std::size_t j = 0; j < lp.objective.size(); ++j) value += lp.objective[j] * x.at(j);
  return value;
}

template <class T>
T max_violation(const LinearProgram<T>& lp, const std::vector<T>& x) {
  T worst(0);
  auto note = [&](const T& v) {
    if (v > worst) worst = v;
  };
  for (std::size_t j = 0; j < lp.variables.size(); ++j) {
    if (!lp.variables[j].free) note(T(-x.at(j)));
    if (lp.variables[j].upper) note(T(x.at(j) - *lp.variables[j].upper));
  }
  for (const auto& row : lp.constraints) {
    T lhs(0);
    for (const auto& [j, a] : row.terms) lhs += a * x.at(j);
    const T diff = lhs - row.rhs;
    note(row.relation == Relation::Equal ? abs_value(diff) : diff);
  }
  return worst;
}

template <class T>
LpSolution<T> solve(const LinearProgram<T>& lp) {
  validate(lp);
  const double tol = Tolerance<T>::feasibility;
  const double ptol = Tolerance<T>::pivot;
  const std::size_t n = lp.variables.size();

  // Structural columns; free variables split into plus and minus parts.
  std::vector<std::size_t> plus(n), minus(n, static_cast<std::size_t>(-1));
  std::size_t ns = 0;
  for (std::size_t j = 0; j < n; ++j) {
    plus[j] = ns++;
    if (lp.variables[j].free) minus[j] = ns++;
  }

  struct Row {
    std::vector<std::pair<std::size_t, T>> terms;
    Relation relation;
    T rhs;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraints.size());
  for (const auto& c : lp.constraints) rows.push_back({c.terms, c.relation, c.rhs});
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.variables[j].upper) rows.push_back({{{j, T(1)}}, Relation::LessEqual, *lp.variables[j].upper});
  }
  const std::size_t m = rows.size();

  std::vector<bool> flipped(m);
  std::vector<bool> needs_artificial(m);
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    flipped[i] = rows[i].rhs < 0;
    needs_artificial[i] = rows[i].relation == Relation::Equal || flipped[i];
    if (rows[i].relation == Relation::LessEqual) ++slack_count;
    if (needs_artificial[i]) ++art_count;
  }
  const std::size_t first_slack = ns;
  const std::size_t first_art = ns + slack_count;
  const std::size_t cols = first_art + art_count;

  Tableau<T> tab(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<std::size_t> identity_col(m);
  {
    std::size_t s = first_slack;
    std::size_t a = first_art;
    for (std::size_t i = 0; i < m; ++i) {
      const T sign = flipped[i] ? T(-1) : T(1);
      for (const auto& [j, coef] : rows[i].terms) {
        tab.at(i, plus[j]) += sign * coef;
        if (minus[j] != static_cast<std::size_t>(-1)) tab.at(i, minus[j]) -= sign * coef;
      }
      tab.rhs(i) = sign * rows[i].rhs;
      std::size_t slack_col = static_cast<std::size_t>(-1);
      if (rows[i].relation == Relation::LessEqual) {
        slack_col = s++;
        tab.at(i, slack_col) = sign;
      }
      if (needs_artificial[i]) {
        const std::size_t art = a++;
        tab.at(i, art) = T(1);
        basis[i] = art;
        identity_col[i] = art;
      } else {
        basis[i] = slack_col;
        identity_col[i] = slack_col;
      }
    }
  }

  LpSolution<T> out;
  const std::size_t pivot_limit = is_exact_v<T> ? static_cast<std::size_t>(-1) : kFloatPivotLimit;

  // Runs Bland-rule iterations on the current cost row. Returns false on
  // unboundedness.
  auto iterate = [&](std::size_t enter_limit) {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t c = 0; c < enter_limit; ++c) {
        if (above(tab.cost(c), Tolerance<T>::optimality)) {
          enter = c;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      T best_ratio{};
      for (std::size_t i = 0; i < m; ++i) {
        const T& a = tab.at(i, enter);
        if (!above(a, ptol)) continue;
        T ratio = tab.rhs(i) / a;
        bool take = false;
        if (leave == m) {
          take = true;
        } else {
          T diff = ratio - best_ratio;
          if (above(T(-diff), tol)) {
            take = true;
          } else if (!above(diff, tol) && basis[i] < basis[leave]) {
            take = true;  // tie: smallest basic index
          }
        }
        if (take) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == m) return false;
      tab.pivot(leave, enter, ptol);
      basis[leave] = enter;
      if (++out.pivots > pivot_limit) throw std::runtime_error("simplex pivot limit exceeded");
    }
  };

  // Phase 1: maximize -sum(artificials).
  if (art_count > 0) {
    for (std::size_t c = 0; c <= cols; ++c) tab.cost(c) = T(0);
    for (std::size_t c = first_art; c < cols; ++c) tab.cost(c) = T(-1);
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_art) continue;
      for (std::size_t c = 0; c <= cols; ++c) tab.cost(c) += tab.at(i, c);
    }
    iterate(cols);
    if (above(tab.cost(cols), tol)) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // with no structural or slack entry are redundant and stay inert.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_art) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (nonzero(tab.at(i, c), ptol)) {
          tab.pivot(i, c, ptol);
          basis[i] = c;
          break;
        }
      }
    }
  }

  // Phase 2 on the original objective in maximize form.
  for (std::size_t c = 0; c <= cols; ++c) tab.cost(c) = T(0);
  std::vector<T> col_cost(cols, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    const T c = lp.sense == Sense::Maximize ? lp.objective[j] : T(-lp.objective[j]);
    col_cost[plus[j]] = c;
    if (minus[j] != static_cast<std::size_t>(-1)) col_cost[minus[j]] = -c;
  }
  for (std::size_t c = 0; c < cols; ++c) tab.cost(c) = col_cost[c];
  for (std::size_t i = 0; i < m; ++i) {
    const T cb = col_cost[basis[i]];
    if (cb == 0) continue;
    for (std::size_t c = 0; c <= cols; ++c) tab.cost(c) -= cb * tab.at(i, c);
  }
  if (!iterate(first_art)) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  std::vector<T> col_value(cols, T(0));
  for (std::size_t i = 0; i < m; ++i) col_value[basis[i]] = tab.rhs(i);
  out.assignment.assign(n, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    out.assignment[j] = col_value[plus[j]];
    if (minus[j] != static_cast<std::size_t>(-1)) out.assignment[j] -= col_value[minus[j]];
  }
  out.status = LpStatus::Optimal;
  out.value = objective_value(lp, out.assignment);
  out.max_residual = max_violation(lp, out.assignment);
  out.duals.resize(lp.constraints.size());
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    T y = -tab.cost(identity_col[i]);
    if (flipped[i]) y = -y;
    if (lp.sense == Sense::Minimize) y = -y;
    out.duals[i] = y;
  }
  return out;
}

template <class T>
void write_lp(std::ostream& out, const LinearProgram<T>& lp) {
  auto num = [](const T& v) {
    if constexpr (is_exact_v<T>) {
      return rational_to_string(v);
    } else {
      return shortest_decimal(v);
    }
  };
  out << "sense " << (lp.sense == Sense::Maximize ? "max" : "min") << '\n';
  for (std::size_t j = 0; j < lp.variables.size(); ++j) {
    const auto& v = lp.variables[j];
    out << "var " << j << ' ' << (v.name.empty() ? "_" : v.name) << ' ' << (v.free ? "free" : "nonneg");
    if (v.upper) out << " upper " << num(*v.upper);
    out << " cost " << num(lp.objective.at(j)) << '\n';
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& row = lp.constraints[i];
    out << "row " << i << ' ' << (row.relation == Relation::Equal ? "eq" : "le") << " rhs " << num(row.rhs)
        << " :";
    for (const auto& [j, a] : row.terms) out << ' ' << j << '*' << num(a);
    out << '\n';
  }
}

LinearProgram<Rational> to_rational(const LinearProgram<double>& lp) {
  LinearProgram<Rational> out;
  out.sense = lp.sense;
  for (std::size_t j = 0; j < lp.variables.size(); ++j) {
    std::optional<Rational> upper;
    if (lp.variables[j].upper) upper = Rational(*lp.variables[j].upper);
    out.add_variable(Rational(lp.objective.at(j)), lp.variables[j].free, upper, lp.variables[j].name);
  }
  for (const auto& row : lp.constraints) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (const auto& [j, a] : row.terms) terms.emplace_back(j, Rational(a));
    out.add_constraint(std::move(terms), row.relation, Rational(row.rhs));
  }
  return out;
}

template LpSolution<double> solve(const LinearProgram<double>&);
template LpSolution<Rational> solve(const LinearProgram<Rational>&);
template double max_violation(const LinearProgram<double>&, const std::vector<double>&);
template Rational max_violation(const LinearProgram<Rational>&, const std::vector<Rational>&);
template double objective_value(const LinearProgram<double>&, const std::vector<double>&);
template Rational objective_value(const LinearProgram<Rational>&, const std::vector<Rational>&);
template void write_lp(std::ostream&, const LinearProgram<double>&);
template void write_lp(std::ostream&, const LinearProgram<Rational>&);

}  // namespace curvlab

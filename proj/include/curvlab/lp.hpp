#pragma once

#include "curvlab/rational.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curvlab {

enum class Sense { Maximize, Minimize };
enum class Relation { Equal, LessEqual };
enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus status);

template <class T>
struct LpVariable {
  bool free = false;           // lower bound -inf instead of 0
  std::optional<T> upper;      // optional upper bound
  std::string name;
};

template <class T>
struct LpConstraint {
  std::vector<std::pair<std::size_t, T>> terms;  // sparse row
  Relation relation = Relation::LessEqual;
  T rhs{};
};

/// Small dense LP: optimize objective . x subject to the listed rows and
/// per-variable bounds.
template <class T>
struct LinearProgram {
  Sense sense = Sense::Maximize;
  std::vector<T> objective;
  std::vector<LpVariable<T>> variables;
  std::vector<LpConstraint<T>> constraints;

  std::size_t add_variable(T cost, bool free = false, std::optional<T> upper = std::nullopt,
                           std::string name = {}) {
    objective.push_back(std::move(cost));
    variables.push_back({free, std::move(upper), std::move(name)});
    return variables.size() - 1;
  }

  void add_constraint(std::vector<std::pair<std::size_t, T>> terms, Relation relation, T rhs) {
    constraints.push_back({std::move(terms), relation, std::move(rhs)});
  }
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  T value{};
  std::vector<T> assignment;
  /// One price per constraint row, sign convention of the original sense:
  /// value == sum_i price_i * rhs_i (+ upper-bound contributions).
  std::vector<T> duals;
  /// Max violation of any row or bound by `assignment`.
  T max_residual{};
  std::size_t pivots = 0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
///
/// Float mode compares against Tolerance<double>; rational mode is exact and
/// cannot overflow (GMP integers grow as needed). Throws
/// std::invalid_argument on dimension mismatch, bad indices or non-finite
/// data.
template <class T>
LpSolution<T> solve(const LinearProgram<T>& lp);

/// Residuals of `x` against the rows and bounds of `lp` (max violation).
template <class T>
T max_violation(const LinearProgram<T>& lp, const std::vector<T>& x);

/// objective . x
template <class T>
T objective_value(const LinearProgram<T>& lp, const std::vector<T>& x);

/// Plain-text dump, one item per line:
///   sense max|min
///   var <i> <name> free|nonneg [upper <u>] cost <c>
///   row <i> eq|le rhs <b> : <j>*<a> ...
template <class T>
void write_lp(std::ostream& out, const LinearProgram<T>& lp);

LinearProgram<Rational> to_rational(const LinearProgram<double>& lp);

}  // namespace curvlab

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <type_traits>

namespace curvlab {

/// Arbitrary-precision rational backed by GMP. Expression templates are
/// disabled so that `auto` never captures a lazy expression.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Arithmetic used by the LP solver and the curvature routines.
enum class Mode { Float, Exact };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Parses "3", "-0.125", "1e-3", "2.5E+2" or "7/8" into an exact rational.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string rational_to_string(const Rational& value);

/// Shortest decimal text that round-trips the double.
std::string shortest_decimal(double value);

/// Decimal text with `digits` significant digits, locale independent.
std::string format_number(double value, int digits = 12);

inline double to_double(double value) { return value; }
inline double to_double(const Rational& value) { return value.convert_to<double>(); }

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Comparison slack for scalar type T: zero for rationals.
template <class T>
struct Tolerance;

template <>
struct Tolerance<double> {
  static constexpr double feasibility = 1e-9;
  static constexpr double optimality = 1e-9;
  static constexpr double pivot = 1e-11;
};

template <>
struct Tolerance<Rational> {
  static constexpr double feasibility = 0.0;
  static constexpr double optimality = 0.0;
  static constexpr double pivot = 0.0;
};

/// Converts an exact value into scalar type T.
template <class T>
T from_rational(const Rational& value) {
  if constexpr (is_exact_v<T>) {
    return value;
  } else {
    return to_double(value);
  }
}

template <class T>
T from_integer(long long value) {
  return T(value);
}

template <class T>
T abs_value(const T& value) {
  return value < T(0) ? T(-value) : value;
}

}  // namespace curvlab

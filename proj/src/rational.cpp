#include "curvlab/rational.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace curvlab {

std::string_view to_string(Mode mode) {
  return mode == Mode::Exact ? "exact-rational" : "float";
}

Mode parse_mode(std::string_view text) {
  if (text == "float") return Mode::Float;
  if (text == "exact-rational" || text == "exact" || text == "rational") return Mode::Exact;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected float or exact-rational)");
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational pow10(long exponent) {
  boost::multiprecision::mpz_int p = 1;
  for (long i = 0; i < exponent; ++i) p *= 10;
  return Rational(p);
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("malformed number '" + std::string(original) + "'");
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) return fail();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return fail();
    if (!int_part.empty() && !all_digits(int_part)) return fail();
    if (!frac_part.empty() && !all_digits(frac_part)) return fail();
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(text)) return fail();
    digits = std::string(text);
  }
  // mpz parsing treats a leading 0 as an octal prefix.
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  Rational value{boost::multiprecision::mpz_int(digits)};
  if (exponent > 0) value *= pow10(exponent);
  if (exponent < 0) value /= pow10(-exponent);
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed fraction '" + std::string(original) + "'");
    }
    auto strip = [](std::string_view s) {
      const auto first = s.find_first_not_of('0');
      return first == std::string_view::npos ? std::string("0") : std::string(s.substr(first));
    };
    boost::multiprecision::mpz_int n(strip(num));
    boost::multiprecision::mpz_int d(strip(den));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(original) + "'");
    Rational value(n, d);
    return negative ? Rational(-value) : value;
  }
  return parse_decimal(text, original);
}

std::string rational_to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string shortest_decimal(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string format_number(double value, int digits) {
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, digits);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

}  // namespace curvlab

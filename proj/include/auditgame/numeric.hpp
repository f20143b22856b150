#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>
#include <string_view>

namespace auditgame {

/// Exact rational scalar. Expression templates are disabled so generic code can
/// use `auto` on arithmetic results.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class NumericMode { rational, floating };

NumericMode parse_numeric_mode(std::string_view text);
std::string to_string(NumericMode mode);

/// Comparison policy per scalar type. Rationals compare exactly; doubles use
/// a tolerance scaled by the operand magnitudes.
template <class T>
struct Num;

template <>
struct Num<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool leq(const Rational& a, const Rational& b) { return a <= b; }
  static bool lt(const Rational& a, const Rational& b) { return a < b; }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
};

template <>
struct Num<double> {
  static constexpr bool exact = false;
  static constexpr double tolerance = 1e-12;
  static double scale(double a, double b) { return 1.0 + std::fabs(a) + std::fabs(b); }
  static bool is_zero(double x) { return std::fabs(x) <= tolerance * (1.0 + std::fabs(x)); }
  static bool leq(double a, double b) { return a <= b + tolerance * scale(a, b); }
  static bool lt(double a, double b) { return a < b - tolerance * scale(a, b); }
  static bool eq(double a, double b) { return std::fabs(a - b) <= tolerance * scale(a, b); }
  static double abs(double x) { return std::fabs(x); }
};

template <class T>
T min_of(const T& a, const T& b) {
  return b < a ? b : a;
}
template <class T>
T max_of(const T& a, const T& b) {
  return a < b ? b : a;
}
template <class T>
T positive_part(const T& x) {
  return x < 0 ? T(0) : x;
}

/// Parses an integer, a decimal ("0.25", "-1.5e2") or a ratio "p/q" exactly.
Rational parse_rational(std::string_view text);

/// Nearest double to an exact rational (round-half-even).
double to_double(const Rational& x);
inline double to_double(double x) { return x; }

template <class T>
T from_rational(const Rational& x);
template <>
inline Rational from_rational<Rational>(const Rational& x) {
  return x;
}
template <>
inline double from_rational<double>(const Rational& x) {
  return to_double(x);
}

/// i / d in the scalar type (exact for rationals, correctly rounded for doubles).
template <class T>
T ratio(long long i, long long d) {
  if constexpr (std::is_same_v<T, double>) {
    return static_cast<double>(i) / static_cast<double>(d);
  } else {
    return Rational(i) / Rational(d);
  }
}

/// Shortest exact text: "p/q" or "p" for rationals, %.15g for doubles.
std::string format_exact(const Rational& x);
std::string format_exact(double x);

/// Decimal with 15 significant digits (%.15g of the correctly rounded double).
std::string format15(double x);
inline std::string format15(const Rational& x) { return format15(to_double(x)); }

}  // namespace auditgame

#include "auditgame/numeric.hpp"

#include "auditgame/errors.hpp"

#include <cctype>
#include <cfloat>
#include <algorithm>
#include <cstdio>
#include <string>

namespace auditgame {

NumericMode parse_numeric_mode(std::string_view text) {
  if (text == "rational" || text == "exact") return NumericMode::rational;
  if (text == "float" || text == "double") return NumericMode::floating;
  throw InputError("unknown numeric mode '" + std::string(text) + "' (expected rational|float)");
}

std::string to_string(NumericMode mode) {
  return mode == NumericMode::rational ? "rational" : "float";
}

namespace {

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Rational pow10(long long e) {
  Rational r = 1;
  for (long long i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(const std::string& s) {
  std::string body = s;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body.erase(0, 1);
  }
  long long exponent = 0;
  if (auto epos = body.find_first_of("eE"); epos != std::string::npos) {
    std::string exp_text = body.substr(epos + 1);
    body = body.substr(0, epos);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text[0] == '-' || exp_text[0] == '+')) {
      exp_negative = exp_text[0] == '-';
      exp_text.erase(0, 1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) throw InputError("bad exponent in '" + s + "'");
    exponent = std::stoll(exp_text) * (exp_negative ? -1 : 1);
  }
  std::string int_part = body;
  std::string frac_part;
  if (auto dot = body.find('.'); dot != std::string::npos) {
    int_part = body.substr(0, dot);
    frac_part = body.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw InputError("empty number '" + s + "'");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    throw InputError("not a number: '" + s + "'");
  std::string digits = int_part + frac_part;
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) digits = "0";
  Rational value{boost::multiprecision::mpz_int(digits)};
  exponent -= static_cast<long long>(frac_part.size());
  if (exponent > 0) value *= pow10(exponent);
  if (exponent < 0) value /= pow10(-exponent);
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw InputError("empty numeric value");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_decimal(trim(s.substr(0, slash)));
    Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return num / den;
  }
  return parse_decimal(s);
}

double to_double(const Rational& x) {
  if (x == 0) return 0.0;
  // mpq_get_d truncates; step to the neighbour that is closest in exact terms.
  double d = mpq_get_d(x.backend().data());
  const double up = std::nextafter(d, x > 0 ? DBL_MAX : -DBL_MAX);
  const Rational err_d = Num<Rational>::abs(Rational(d) - x);
  const Rational err_up = Num<Rational>::abs(Rational(up) - x);
  if (err_up < err_d) return up;
  if (err_up == err_d) {
    // Tie: pick the even mantissa.
    int exp_d = 0;
    int exp_up = 0;
    const double m_d = std::frexp(d, &exp_d);
    (void)std::frexp(up, &exp_up);
    const auto mantissa_bits = static_cast<long long>(std::ldexp(m_d, DBL_MANT_DIG));
    return (mantissa_bits % 2 == 0) ? d : up;
  }
  return d;
}

std::string format_exact(const Rational& x) {
  const auto num = boost::multiprecision::numerator(x);
  const auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_exact(double x) { return format15(x); }

std::string format15(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

}  // namespace auditgame

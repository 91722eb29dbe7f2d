#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptampc {

// Exact arithmetic for costs, kappa and objective values.
using Rational = boost::rational<std::int64_t>;

namespace detail {

inline std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

// Accepts "3", "-2", "0.25", "1e-3" and "5/21".
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = detail::parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(detail::parse_int(text.substr(0, slash)), den);
  }

  std::int64_t exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = detail::parse_int(text.substr(e + 1));
    text = text.substr(0, e);
  }
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    exponent -= static_cast<std::int64_t>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  if (digits.empty()) throw std::invalid_argument("malformed number");
  if (digits.size() > 17 || exponent > 17 || exponent < -17) {
    throw std::invalid_argument("number out of exact range: '" + std::string(text) + "'");
  }
  Rational value(detail::parse_int(digits));
  std::int64_t scale = 1;
  for (std::int64_t i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) scale *= 10;
  value = exponent < 0 ? value / scale : value * scale;
  return negative ? -value : value;
}

// Shortest round-trip text of a double, then exact parse. 0.1 becomes 1/10.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::invalid_argument("unprintable number");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// "5/21" or "18".
inline std::string to_exact_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Decimal rendering with 6 significant digits.
inline std::string to_display_string(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", to_double(r));
  return buf;
}

}  // namespace ptampc

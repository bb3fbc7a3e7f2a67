#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "pfree/error.hpp"

namespace pfree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(std::int64_t p, std::int64_t q = 1) {
  if (q == 0) throw PreconditionError("zero denominator");
  return Rational(BigInt(p), BigInt(q));
}

/// Exact rationals always serialize as "p/q" in lowest terms, q > 0.
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Accepts "p/q", "p", and an optional leading sign on p.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) throw ParseError("bad rational: '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] < '0' || s[j] > '9') {
        throw ParseError("bad rational: '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt num = parse_int(text.substr(0, slash));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline BigInt ceil(const Rational& r) {
  const BigInt n = boost::multiprecision::numerator(r);
  const BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (q * d != n && n > 0) ++q;
  return q;
}

inline BigInt floor(const Rational& r) {
  const BigInt n = boost::multiprecision::numerator(r);
  const BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;
  if (q * d != n && n < 0) --q;
  return q;
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

inline Rational size_q(std::size_t n) { return Rational(static_cast<std::uint64_t>(n)); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Smallest integer L with 2^L >= r, for r > 0.
inline std::int64_t ceil_log2(const Rational& r) {
  if (r <= 0) throw PreconditionError("ceil_log2 of non-positive value");
  std::int64_t l = 0;
  Rational p(1);
  if (p >= r) {
    while (p / 2 >= r) {
      p /= 2;
      --l;
    }
    return l;
  }
  while (p < r) {
    p *= 2;
    ++l;
  }
  return l;
}

}  // namespace pfree

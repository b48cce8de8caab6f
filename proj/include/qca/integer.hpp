#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qca/error.hpp"

namespace qca {

// Expression templates are disabled so that `auto` and decltype behave like
// ordinary value arithmetic.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

inline Int abs(const Int& a) { return boost::multiprecision::abs(a); }

inline int sign(const Int& a) { return a.sign(); }

inline Int positive_part(const Int& a) { return a > 0 ? a : Int(0); }

inline std::int64_t to_int64(const Int& x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::Overflow, "integer " + x.str() + " does not fit an exponent slot");
  }
  return x.convert_to<std::int64_t>();
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "exponent addition");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "exponent product");
  return out;
}

inline Int numerator(const Rational& r) { return Int(boost::multiprecision::numerator(r)); }
inline Int denominator(const Rational& r) { return Int(boost::multiprecision::denominator(r)); }

inline std::string to_string(const Rational& r) {
  const Int den = denominator(r);
  if (den == 1) return numerator(r).str();
  return numerator(r).str() + "/" + den.str();
}

}  // namespace qca

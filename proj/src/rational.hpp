#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace ska {

// Exact arithmetic for the partition objective. Magnitudes stay tiny
// (numerators bounded by total entropy, denominators by the user count), so
// 64-bit components are more than enough.
using Rational = boost::rational<std::int64_t>;

inline std::int64_t floor_rat(const Rational& r) {
  std::int64_t n = r.numerator(), d = r.denominator();  // d > 0
  std::int64_t q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline std::int64_t ceil_rat(const Rational& r) {
  std::int64_t n = r.numerator(), d = r.denominator();
  std::int64_t q = n / d;
  if (n % d != 0 && n > 0) ++q;
  return q;
}

inline std::string rational_to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace ska

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace stacktor {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

// Floor division with a positive or negative divisor.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Representative of a modulo |m| in [0, |m|).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += (m < 0 ? -m : m);
  return r;
}

inline Integer floor(const Rational& q) { return floor_div(numerator_of(q), denominator_of(q)); }

inline Rational frac(const Rational& q) { return q - Rational(floor(q)); }

inline bool is_integral(const Rational& q) { return denominator_of(q) == 1; }

inline Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  Integer r = a / gcd(a, b) * b;
  return r < 0 ? -r : r;
}

inline std::int64_t to_i64(const Integer& v) { return v.convert_to<std::int64_t>(); }

inline std::string to_string(const Integer& v) { return v.str(); }

inline std::string to_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

}  // namespace stacktor

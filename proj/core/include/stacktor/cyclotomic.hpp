#pragma once

// Exact scalars in Q(zeta_m), stored densely in the power basis modulo the
// m-th cyclotomic polynomial. Order 1 is plain Q.

#include "stacktor/numbers.hpp"

#include <string>
#include <vector>

namespace stacktor {

// Coefficients of Phi_m, lowest degree first.
const std::vector<Integer>& cyclotomic_polynomial(unsigned m);
unsigned euler_phi(unsigned m);

class Scalar {
 public:
  Scalar() : order_(1), c_(1, Rational(0)) {}
  Scalar(int v) : order_(1), c_(1, Rational(v)) {}
  Scalar(long v) : order_(1), c_(1, Rational(v)) {}
  Scalar(const Integer& v) : order_(1), c_(1, Rational(v)) {}
  Scalar(const Rational& v) : order_(1), c_(1, v) {}

  // zeta_m^k for any integer k.
  static Scalar zeta(unsigned m, long k = 1);
  // From power-basis coefficients; reduced modulo Phi_m.
  static Scalar from_coefficients(unsigned m, std::vector<Rational> coeffs);

  unsigned order() const noexcept { return order_; }
  const std::vector<Rational>& coefficients() const noexcept { return c_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  Rational rational_value() const;  // throws unless is_rational()

  // The same element written in Q(zeta_m); order() must divide m.
  Scalar promoted(unsigned m) const;

  Scalar operator+(const Scalar& rhs) const;
  Scalar operator-(const Scalar& rhs) const;
  Scalar operator*(const Scalar& rhs) const;
  Scalar operator/(const Scalar& rhs) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs) { return *this = *this + rhs; }
  Scalar& operator-=(const Scalar& rhs) { return *this = *this - rhs; }
  Scalar& operator*=(const Scalar& rhs) { return *this = *this * rhs; }
  Scalar inverse() const;
  Scalar pow(long k) const;

  bool operator==(const Scalar& rhs) const;

  // Complex value with zeta_m = exp(2 pi i / m).
  std::pair<double, double> to_complex() const;
  std::string to_string() const;

 private:
  unsigned order_;
  std::vector<Rational> c_;  // length euler_phi(order_)
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }

// Truncated univariate power series over Q, coefficient k of t^k.
using Series = std::vector<Rational>;

Series series_exp(std::size_t terms);
// c / (1 - exp(-c)).
Series series_todd(std::size_t terms);
// f^s for f with constant term 1 and rational s.
Series series_pow(const Series& f, const Rational& s, std::size_t terms);
Series series_mul(const Series& a, const Series& b, std::size_t terms);

}  // namespace stacktor

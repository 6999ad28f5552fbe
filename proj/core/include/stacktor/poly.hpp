#pragma once

// Sparse multivariate polynomials with Scalar coefficients.

#include "stacktor/cyclotomic.hpp"
#include "stacktor/numbers.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stacktor {

enum class MonomialOrder { Grevlex, Lex };

using Monomial = std::vector<std::uint32_t>;

// Strict "a < b" in the given order. Lex compares x_0 first; grevlex compares
// total degree and then the last differing exponent, smaller exponent wins.
bool monomial_less(const Monomial& a, const Monomial& b, MonomialOrder order);
bool monomial_divides(const Monomial& a, const Monomial& b);
Monomial monomial_lcm(const Monomial& a, const Monomial& b);
Monomial monomial_quotient(const Monomial& b, const Monomial& a);  // b / a, a must divide b
Monomial monomial_product(const Monomial& a, const Monomial& b);
std::uint64_t monomial_degree(const Monomial& a);
bool monomials_coprime(const Monomial& a, const Monomial& b);

struct MonomialGreater {
  MonomialOrder order = MonomialOrder::Grevlex;
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(b, a, order); }
};

struct Variable {
  std::string name;
  Rational degree = 0;
  std::optional<std::size_t> inverse;  // index of the paired inverse variable
};

// Ordered list of variable names. A unit x is declared together with x_inv,
// placed right after it.
class VarTable {
 public:
  std::size_t add(const std::string& name, const Rational& degree = 0);
  // Returns the index of x; x_inv follows at index + 1.
  std::size_t add_unit(const std::string& name, const Rational& degree = 0);

  std::size_t size() const noexcept { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_.at(i); }
  const std::string& name(std::size_t i) const { return vars_.at(i).name; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require(std::string_view name) const;
  std::vector<std::string> names() const;
  const std::vector<Variable>& variables() const noexcept { return vars_; }

  bool operator==(const VarTable& rhs) const;

 private:
  std::vector<Variable> vars_;
};

class Poly {
 public:
  using Terms = std::map<Monomial, Scalar, MonomialGreater>;

  Poly() : Poly(0) {}
  explicit Poly(std::size_t nvars, MonomialOrder order = MonomialOrder::Grevlex);

  static Poly constant(std::size_t nvars, const Scalar& c, MonomialOrder order = MonomialOrder::Grevlex);
  static Poly variable(std::size_t nvars, std::size_t i, MonomialOrder order = MonomialOrder::Grevlex);
  static Poly term(const Monomial& m, const Scalar& c, MonomialOrder order = MonomialOrder::Grevlex);

  std::size_t nvars() const noexcept { return nvars_; }
  MonomialOrder order() const noexcept { return terms_.key_comp().order; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;

  // Leading data; the polynomial must be nonzero.
  const Monomial& leading_monomial() const;
  const Scalar& leading_coefficient() const;

  Scalar coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, const Scalar& c);

  Poly operator+(const Poly& rhs) const;
  Poly operator-(const Poly& rhs) const;
  Poly operator-() const;
  Poly operator*(const Poly& rhs) const;
  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs) { return *this = *this * rhs; }
  Poly scaled(const Scalar& c) const;
  Poly times_term(const Monomial& m, const Scalar& c) const;
  Poly pow(unsigned k) const;
  Poly monic() const;

  std::uint64_t total_degree() const;
  Poly with_order(MonomialOrder order) const;
  // Same polynomial in a ring with more variables appended or with variables renumbered.
  Poly remapped(std::size_t nvars, const std::vector<std::size_t>& new_index) const;
  // Substitutes images[i] for variable i; images share a target ring.
  Poly substitute(const std::vector<Poly>& images) const;

  bool operator==(const Poly& rhs) const;

 private:
  std::size_t nvars_;
  Terms terms_;
};

// Ring-aware helpers.
Poly var(const VarTable& vars, std::string_view name, MonomialOrder order = MonomialOrder::Grevlex);
Poly one(const VarTable& vars, MonomialOrder order = MonomialOrder::Grevlex);
// x^k for integer k; negative powers use the paired inverse variable.
Poly unit_power(const VarTable& vars, std::size_t i, const Integer& k, MonomialOrder order = MonomialOrder::Grevlex);

// Weighted degree from the declared variable degrees; nullopt if not homogeneous.
std::optional<Rational> weighted_degree(const Poly& p, const VarTable& vars);

// Text form: rational coefficients, `*`, `^` with integer exponents (negative
// ones only for units), `+`, `-`, parentheses, declared names and zetaM.
Poly parse_poly(std::string_view text, const VarTable& vars, MonomialOrder order = MonomialOrder::Grevlex);
std::string to_string(const Poly& p, const VarTable& vars);

}  // namespace stacktor

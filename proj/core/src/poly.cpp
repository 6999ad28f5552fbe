#include "stacktor/poly.hpp"

#include "stacktor/errors.hpp"

#include <algorithm>
#include <cctype>

namespace stacktor {

bool monomial_less(const Monomial& a, const Monomial& b, MonomialOrder order) {
  if (order == MonomialOrder::Lex) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
  const auto da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

bool monomial_divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

Monomial monomial_quotient(const Monomial& b, const Monomial& a) {
  Monomial out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] - a[i];
  return out;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::uint64_t monomial_degree(const Monomial& a) {
  std::uint64_t d = 0;
  for (auto e : a) d += e;
  return d;
}

bool monomials_coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

std::size_t VarTable::add(const std::string& name, const Rational& degree) {
  if (index_of(name)) throw Error(ErrorCode::InvalidArgument, "duplicate variable " + name);
  vars_.push_back(Variable{name, degree, std::nullopt});
  return vars_.size() - 1;
}

std::size_t VarTable::add_unit(const std::string& name, const Rational& degree) {
  const std::size_t i = add(name, degree);
  const std::size_t j = add(name + "_inv", -degree);
  vars_[i].inverse = j;
  vars_[j].inverse = i;
  return i;
}

std::optional<std::size_t> VarTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::size_t VarTable::require(std::string_view name) const {
  const auto i = index_of(name);
  if (!i) throw Error(ErrorCode::InvalidArgument, "unknown variable " + std::string(name));
  return *i;
}

std::vector<std::string> VarTable::names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

bool VarTable::operator==(const VarTable& rhs) const {
  if (vars_.size() != rhs.vars_.size()) return false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name != rhs.vars_[i].name || vars_[i].degree != rhs.vars_[i].degree ||
        vars_[i].inverse != rhs.vars_[i].inverse)
      return false;
  }
  return true;
}

Poly::Poly(std::size_t nvars, MonomialOrder order) : nvars_(nvars), terms_(MonomialGreater{order}) {}

Poly Poly::constant(std::size_t nvars, const Scalar& c, MonomialOrder order) {
  Poly p(nvars, order);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i, MonomialOrder order) {
  Monomial m(nvars, 0);
  m.at(i) = 1;
  return term(m, Scalar(1), order);
}

Poly Poly::term(const Monomial& m, const Scalar& c, MonomialOrder order) {
  Poly p(m.size(), order);
  p.add_term(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0);
}

const Monomial& Poly::leading_monomial() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "leading monomial of zero polynomial");
  return terms_.begin()->first;
}

const Scalar& Poly::leading_coefficient() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

Scalar Poly::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (m.size() != nvars_) throw Error(ErrorCode::InvalidArgument, "monomial has wrong number of variables");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& rhs) {
  if (rhs.nvars_ != nvars_) throw Error(ErrorCode::InvalidArgument, "polynomials in different rings");
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  if (rhs.nvars_ != nvars_) throw Error(ErrorCode::InvalidArgument, "polynomials in different rings");
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& rhs) const {
  Poly out = *this;
  out += rhs;
  return out;
}

Poly Poly::operator-(const Poly& rhs) const {
  Poly out = *this;
  out -= rhs;
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& kv : out.terms_) kv.second = -kv.second;
  return out;
}

Poly Poly::times_term(const Monomial& m, const Scalar& c) const {
  Poly out(nvars_, order());
  if (c.is_zero()) return out;
  // Multiplying by a monomial preserves the order, so append at the end.
  for (const auto& [mono, coeff] : terms_) {
    out.terms_.emplace_hint(out.terms_.end(), monomial_product(mono, m), coeff * c);
  }
  return out;
}

Poly Poly::operator*(const Poly& rhs) const {
  if (rhs.nvars_ != nvars_) throw Error(ErrorCode::InvalidArgument, "polynomials in different rings");
  Poly out(nvars_, order());
  const Poly& small = terms_.size() <= rhs.terms_.size() ? *this : rhs;
  const Poly& big = terms_.size() <= rhs.terms_.size() ? rhs : *this;
  for (const auto& [m, c] : small.terms_) out += big.times_term(m, c);
  return out;
}

Poly Poly::scaled(const Scalar& c) const { return times_term(Monomial(nvars_, 0), c); }

Poly Poly::pow(unsigned k) const {
  Poly result = constant(nvars_, Scalar(1), order());
  Poly base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(leading_coefficient().inverse());
}

std::uint64_t Poly::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& kv : terms_) d = std::max(d, monomial_degree(kv.first));
  return d;
}

Poly Poly::with_order(MonomialOrder order) const {
  Poly out(nvars_, order);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c);
  return out;
}

Poly Poly::remapped(std::size_t nvars, const std::vector<std::size_t>& new_index) const {
  if (new_index.size() != nvars_) throw Error(ErrorCode::InvalidArgument, "remapped: index map has wrong length");
  Poly out(nvars, order());
  for (const auto& [m, c] : terms_) {
    Monomial n(nvars, 0);
    for (std::size_t i = 0; i < nvars_; ++i) n.at(new_index[i]) += m[i];
    out.add_term(n, c);
  }
  return out;
}

Poly Poly::substitute(const std::vector<Poly>& images) const {
  if (images.size() != nvars_) throw Error(ErrorCode::InvalidArgument, "substitute: need one image per variable");
  if (nvars_ == 0) return *this;
  const std::size_t target = images.front().nvars();
  const MonomialOrder ord = images.front().order();
  std::vector<std::vector<Poly>> powers(nvars_);
  auto power = [&](std::size_t i, std::uint32_t e) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(constant(target, Scalar(1), ord));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };
  Poly out(target, ord);
  for (const auto& [m, c] : terms_) {
    Poly t = constant(target, c, ord);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i]) t = t * power(i, m[i]);
    out += t;
  }
  return out;
}

bool Poly::operator==(const Poly& rhs) const {
  if (nvars_ != rhs.nvars_ || terms_.size() != rhs.terms_.size()) return false;
  for (const auto& [m, c] : terms_) {
    const auto it = rhs.terms_.find(m);
    if (it == rhs.terms_.end() || !(it->second == c)) return false;
  }
  return true;
}

Poly var(const VarTable& vars, std::string_view name, MonomialOrder order) {
  return Poly::variable(vars.size(), vars.require(name), order);
}

Poly one(const VarTable& vars, MonomialOrder order) { return Poly::constant(vars.size(), Scalar(1), order); }

Poly unit_power(const VarTable& vars, std::size_t i, const Integer& k, MonomialOrder order) {
  Monomial m(vars.size(), 0);
  if (k >= 0) {
    m.at(i) = static_cast<std::uint32_t>(k);
  } else {
    const auto inv = vars[i].inverse;
    if (!inv) throw Error(ErrorCode::InvalidArgument, "negative power of non-unit variable " + vars.name(i));
    m.at(*inv) = static_cast<std::uint32_t>(-k);
  }
  return Poly::term(m, Scalar(1), order);
}

std::optional<Rational> weighted_degree(const Poly& p, const VarTable& vars) {
  std::optional<Rational> deg;
  for (const auto& [m, c] : p.terms()) {
    Rational d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += Rational(static_cast<long>(m[i])) * vars[i].degree;
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg ? deg : std::optional<Rational>(Rational(0));
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarTable& vars, MonomialOrder order)
      : s_(text), vars_(vars), order_(order) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::InvalidArgument,
                "polynomial parse error at " + std::to_string(pos_) + ": " + what + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly constant(const Scalar& c) const { return Poly::constant(vars_.size(), c, order_); }

  Poly expr() {
    skip();
    Poly p(vars_.size(), order_);
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    Poly t = term();
    p = neg ? -t : t;
    while (true) {
      if (accept('+')) p += term();
      else if (accept('-')) p -= term();
      else break;
    }
    return p;
  }

  Poly term() {
    Poly p = power();
    while (true) {
      if (accept('*')) {
        p = p * power();
      } else if (accept('/')) {
        const Poly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
        p = p.scaled(d.leading_coefficient().inverse());
      } else {
        break;
      }
    }
    return p;
  }

  long exponent() {
    skip();
    bool paren = accept('(');
    bool neg = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected exponent");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (paren && !accept(')')) fail("expected ')'");
    return neg ? -e : e;
  }

  Poly power() {
    skip();
    if (accept('-')) return -power();
    std::optional<std::size_t> single;
    Poly base = atom(&single);
    if (!accept('^')) return base;
    const long e = exponent();
    if (e >= 0) return base.pow(static_cast<unsigned>(e));
    if (base.is_constant() && !base.is_zero()) return constant(base.leading_coefficient().pow(e));
    if (single && vars_[*single].inverse) return unit_power(vars_, *single, Integer(e), order_);
    fail("negative exponent of a non-unit");
  }

  Poly atom(std::optional<std::size_t>* single) {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return constant(Scalar(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (const auto i = vars_.index_of(name)) {
        *single = *i;
        return Poly::variable(vars_.size(), *i, order_);
      }
      if (name.size() > 4 && name.compare(0, 4, "zeta") == 0 &&
          std::all_of(name.begin() + 4, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        return constant(Scalar::zeta(static_cast<unsigned>(std::stoul(name.substr(4)))));
      }
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const VarTable& vars_;
  MonomialOrder order_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, const VarTable& vars, MonomialOrder order) {
  return Parser(text, vars, order).parse();
}

std::string to_string(const Poly& p, const VarTable& vars) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += vars.name(i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (c.is_rational()) {
      Rational v = c.rational_value();
      const bool neg = v < 0;
      if (neg) v = -v;
      out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
      if (mono.empty()) out += stacktor::to_string(v);
      else if (v == 1) out += mono;
      else out += stacktor::to_string(v) + "*" + mono;
    } else {
      if (!out.empty()) out += " + ";
      out += c.to_string();
      if (!mono.empty()) out += "*" + mono;
    }
  }
  return out;
}

}  // namespace stacktor

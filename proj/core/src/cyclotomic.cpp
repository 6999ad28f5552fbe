#include "stacktor/cyclotomic.hpp"

#include "stacktor/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>

namespace stacktor {

namespace {

using RatPoly = std::vector<Rational>;

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of p modulo a monic integer polynomial.
RatPoly reduce_mod(RatPoly p, const std::vector<Integer>& modulus) {
  const std::size_t deg = modulus.size() - 1;
  for (std::size_t k = p.size(); k-- > deg;) {
    const Rational lead = p[k];
    if (lead == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) p[k - deg + j] -= lead * Rational(modulus[j]);
  }
  p.resize(deg, Rational(0));
  return p;
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

RatPoly sub(const RatPoly& a, const RatPoly& b) {
  RatPoly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

// Quotient and remainder of a by nonzero b.
std::pair<RatPoly, RatPoly> divmod(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  RatPoly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rational f = a.back() / b.back();
    q[shift] = f;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
    trim(a);
  }
  return {q, a};
}

std::vector<Integer> compute_cyclotomic(unsigned m) {
  // x^m - 1 divided by Phi_d for every proper divisor d.
  std::vector<Integer> p(m + 1, Integer(0));
  p[0] = -1;
  p[m] = 1;
  for (unsigned d = 1; d < m; ++d) {
    if (m % d) continue;
    const auto& phi = cyclotomic_polynomial(d);
    const long dp = static_cast<long>(phi.size()) - 1;
    std::vector<Integer> q(p.size() - phi.size() + 1, Integer(0));
    for (long k = static_cast<long>(p.size()) - 1; k >= dp; --k) {
      const Integer lead = p[k];
      if (lead == 0) continue;
      q[k - dp] = lead;
      for (long j = 0; j <= dp; ++j) p[k - dp + j] -= lead * phi[j];
    }
    p = q;
  }
  return p;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(unsigned m) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be positive");
  static std::recursive_mutex mu;
  static std::map<unsigned, std::vector<Integer>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  auto p = compute_cyclotomic(m);
  return cache.emplace(m, std::move(p)).first->second;
}

unsigned euler_phi(unsigned m) {
  unsigned result = m;
  unsigned n = m;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

Scalar Scalar::from_coefficients(unsigned m, std::vector<Rational> coeffs) {
  Scalar s;
  s.order_ = m;
  s.c_ = reduce_mod(std::move(coeffs), cyclotomic_polynomial(m));
  return s;
}

Scalar Scalar::zeta(unsigned m, long k) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "zeta: order must be positive");
  const long r = ((k % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m);
  RatPoly p(static_cast<std::size_t>(r) + 1, Rational(0));
  p[static_cast<std::size_t>(r)] = 1;
  return from_coefficients(m, std::move(p));
}

bool Scalar::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (std::size_t k = 1; k < c_.size(); ++k)
    if (c_[k] != 0) return false;
  return true;
}

bool Scalar::is_one() const { return is_rational() && c_[0] == 1; }

Rational Scalar::rational_value() const {
  if (!is_rational()) throw Error(ErrorCode::InvalidArgument, "scalar is not rational: " + to_string());
  return c_[0];
}

Scalar Scalar::promoted(unsigned m) const {
  if (m == order_) return *this;
  if (m % order_) throw Error(ErrorCode::InvalidArgument, "promoted: order does not divide target");
  const std::size_t step = m / order_;
  RatPoly p((c_.size() - 1) * step + 1, Rational(0));
  for (std::size_t k = 0; k < c_.size(); ++k) p[k * step] = c_[k];
  return from_coefficients(m, std::move(p));
}

Scalar Scalar::operator+(const Scalar& rhs) const {
  if (order_ != rhs.order_) {
    const unsigned m = static_cast<unsigned>(std::lcm(order_, rhs.order_));
    return promoted(m) + rhs.promoted(m);
  }
  Scalar out = *this;
  for (std::size_t k = 0; k < c_.size(); ++k) out.c_[k] += rhs.c_[k];
  return out;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

Scalar Scalar::operator-(const Scalar& rhs) const { return *this + (-rhs); }

Scalar Scalar::operator*(const Scalar& rhs) const {
  if (order_ != rhs.order_) {
    const unsigned m = static_cast<unsigned>(std::lcm(order_, rhs.order_));
    return promoted(m) * rhs.promoted(m);
  }
  if (c_.size() == 1) {
    Scalar out = *this;
    out.c_[0] *= rhs.c_[0];
    return out;
  }
  return from_coefficients(order_, mul(c_, rhs.c_));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero scalar");
  if (is_rational()) {
    Scalar out = *this;
    out.c_[0] = Rational(1) / c_[0];
    return out;
  }
  // Extended Euclid: s * a + t * Phi = g with g constant.
  RatPoly phi;
  for (const auto& x : cyclotomic_polynomial(order_)) phi.emplace_back(x);
  RatPoly r0 = phi, r1 = c_;
  RatPoly s0, s1{Rational(1)};
  trim(r1);
  while (r1.size() > 1) {
    auto [q, r] = divmod(r0, r1);
    RatPoly s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  const Rational g = r1.at(0);
  for (auto& x : s1) x /= g;
  return from_coefficients(order_, std::move(s1));
}

Scalar Scalar::operator/(const Scalar& rhs) const { return *this * rhs.inverse(); }

Scalar Scalar::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  Scalar result = Scalar(1).promoted(order_);
  Scalar base = *this;
  while (k) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

bool Scalar::operator==(const Scalar& rhs) const {
  if (order_ != rhs.order_) {
    const unsigned m = static_cast<unsigned>(std::lcm(order_, rhs.order_));
    return promoted(m).c_ == rhs.promoted(m).c_;
  }
  return c_ == rhs.c_;
}

std::pair<double, double> Scalar::to_complex() const {
  double re = 0, im = 0;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    const double v = c_[k].convert_to<double>();
    const double a = 2 * std::numbers::pi * static_cast<double>(k) / order_;
    re += v * std::cos(a);
    im += v * std::sin(a);
  }
  return {re, im};
}

std::string Scalar::to_string() const {
  std::string out;
  const std::string z = "zeta" + std::to_string(order_);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    Rational v = c_[k];
    const bool neg = v < 0;
    if (neg) v = -v;
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    std::string mono = k == 0 ? "" : (k == 1 ? z : z + "^" + std::to_string(k));
    if (mono.empty()) {
      out += stacktor::to_string(v);
    } else if (v == 1) {
      out += mono;
    } else {
      out += stacktor::to_string(v) + "*" + mono;
    }
  }
  if (out.empty()) return "0";
  if (!is_rational()) return "(" + out + ")";
  return out;
}

Series series_mul(const Series& a, const Series& b, std::size_t terms) {
  Series out(terms, Rational(0));
  for (std::size_t i = 0; i < a.size() && i < terms; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < terms; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series series_exp(std::size_t terms) {
  Series out(terms, Rational(0));
  Rational f = 1;
  for (std::size_t k = 0; k < terms; ++k) {
    if (k) f /= Rational(static_cast<long>(k));
    out[k] = f;
  }
  return out;
}

Series series_pow(const Series& f, const Rational& s, std::size_t terms) {
  if (f.empty() || f[0] != 1) throw Error(ErrorCode::InvalidArgument, "series_pow: constant term must be 1");
  Series a(terms, Rational(0));
  if (terms == 0) return a;
  a[0] = 1;
  for (std::size_t k = 1; k < terms; ++k) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= k && j < f.size(); ++j) {
      if (f[j] == 0) continue;
      acc += ((s + 1) * Rational(static_cast<long>(j)) - Rational(static_cast<long>(k))) * f[j] * a[k - j];
    }
    a[k] = acc / Rational(static_cast<long>(k));
  }
  return a;
}

Series series_todd(std::size_t terms) {
  // (1 - e^{-c}) / c = sum (-1)^k c^k / (k+1)!
  Series g(terms, Rational(0));
  Rational f = 1;
  for (std::size_t k = 0; k < terms; ++k) {
    f /= Rational(static_cast<long>(k + 1));
    g[k] = (k % 2 ? -f : f);
  }
  return series_pow(g, Rational(-1), terms);
}

}  // namespace stacktor

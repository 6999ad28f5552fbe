#include "stacktor/cyclotomic.hpp"
#include "stacktor/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

using namespace stacktor;

namespace {

std::complex<double> value(const Scalar& s) {
  const auto [re, im] = s.to_complex();
  return {re, im};
}

std::complex<double> root(unsigned m, long k) { return std::polar(1.0, 2 * M_PI * static_cast<double>(k) / m); }

int mobius(unsigned n) {
  int mu = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

}  // namespace

TEST(Cyclotomic, PolynomialsAndTotient) {
  EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<Integer>{-1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(4), (std::vector<Integer>{1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(6), (std::vector<Integer>{1, -1, 1}));
  for (unsigned m = 1; m <= 30; ++m) {
    unsigned phi = 0;
    for (unsigned k = 1; k <= m; ++k) phi += std::gcd(k, m) == 1;
    EXPECT_EQ(euler_phi(m), phi);
    EXPECT_EQ(cyclotomic_polynomial(m).size(), phi + 1);
  }
}

TEST(Cyclotomic, RootsOfUnity) {
  for (unsigned m = 1; m <= 24; ++m) {
    EXPECT_TRUE(Scalar::zeta(m).pow(static_cast<long>(m)).is_one()) << m;
    EXPECT_EQ(Scalar::zeta(m, -1) * Scalar::zeta(m), Scalar(1));
    // Sum of primitive m-th roots is mu(m).
    Scalar s;
    for (unsigned k = 1; k <= m; ++k)
      if (std::gcd(k, m) == 1) s += Scalar::zeta(m, k);
    EXPECT_EQ(s, Scalar(mobius(m))) << m;
  }
}

TEST(Cyclotomic, PromotionKeepsValues) {
  const Scalar z3 = Scalar::zeta(3);
  EXPECT_EQ(z3.promoted(6), Scalar::zeta(6, 2));
  EXPECT_EQ(Scalar::zeta(2), Scalar(-1));
  EXPECT_EQ(Scalar::zeta(4, 2), Scalar(-1));
  EXPECT_TRUE((z3 + z3.pow(2)).is_rational());
  EXPECT_EQ((z3 + z3.pow(2)).rational_value(), -1);
}

TEST(Cyclotomic, ArithmeticAgreesWithFloatingPoint) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  for (int t = 0; t < 200; ++t) {
    const unsigned m = 1 + t % 15;
    auto random_scalar = [&] {
      Scalar s;
      for (unsigned k = 0; k < m; ++k) s += Scalar::zeta(m, k) * Scalar(Rational(coeff(rng), 1 + t % 3));
      return s;
    };
    const Scalar a = random_scalar(), b = random_scalar();
    auto close = [](std::complex<double> x, std::complex<double> y) { return std::abs(x - y) < 1e-9 * (1 + std::abs(y)); };
    EXPECT_TRUE(close(value(a + b), value(a) + value(b)));
    EXPECT_TRUE(close(value(a * b), value(a) * value(b)));
    if (!b.is_zero()) {
      EXPECT_TRUE(close(value(a / b), value(a) / value(b)));
      EXPECT_EQ(b * b.inverse(), Scalar(1));
    }
    EXPECT_TRUE(close(value(Scalar::zeta(m, t)), root(m, t)));
  }
}

TEST(Cyclotomic, DivisionByZeroThrows) { EXPECT_THROW(Scalar(0).inverse(), Error); }

TEST(Cyclotomic, TextForm) {
  EXPECT_EQ(Scalar(Rational(-1, 2)).to_string(), "-1/2");
  EXPECT_EQ(Scalar::zeta(3).to_string(), "(zeta3)");
  EXPECT_EQ((Scalar(Rational(1, 2)) - Scalar::zeta(4)).to_string(), "(1/2 - zeta4)");
}

TEST(Series, ExpAndTodd) {
  const auto e = series_exp(5);
  EXPECT_EQ(e, (Series{1, 1, Rational(1, 2), Rational(1, 6), Rational(1, 24)}));
  const auto td = series_todd(5);
  EXPECT_EQ(td, (Series{1, Rational(1, 2), Rational(1, 12), 0, Rational(-1, 720)}));
  // td(c) * (1 - exp(-c)) = c.
  Series one_minus(5);
  for (std::size_t k = 1; k < 5; ++k) one_minus[k] = (k % 2 ? 1 : -1) * e[k];
  const auto prod = series_mul(td, one_minus, 5);
  EXPECT_EQ(prod, (Series{0, 1, 0, 0, 0}));
}

TEST(Series, RationalPowers) {
  const auto e = series_exp(6);
  const auto half = series_pow(e, Rational(1, 2), 6);
  EXPECT_EQ(series_mul(half, half, 6), e);
  const auto inv = series_pow(e, Rational(-1), 6);
  EXPECT_EQ(series_mul(inv, e, 6), (Series{1, 0, 0, 0, 0, 0}));
}

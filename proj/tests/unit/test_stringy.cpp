#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace stacktor;

namespace {

struct Built {
  StackyFan sf;
  TwistSpec twist;
  KRing k;
  CRRing cr;
};

Built build(const StackyFan& sf, const TwistSpec& tw) { return {sf, tw, k_ring(sf, tw), cr_ring(sf, tw)}; }

std::vector<std::pair<std::string, Built>> twisted_cases() {
  std::vector<std::pair<std::string, Built>> out;
  out.emplace_back("P1 over P1, O(1)", build(fixtures::p1(), projective_twist(1, {1})));
  out.emplace_back("P(1,3) over P1, O(2)", build(fixtures::weighted(1, 3), projective_twist(1, {2})));
  return out;
}

}  // namespace

TEST(Stringy, ProductCheckOverPoint) {
  for (const auto& c : fixtures::suite()) {
    const auto cr = cr_ring(c.sf, fixtures::over_point(c.sf));
    const auto r = cr_product_check(c.sf, cr);
    EXPECT_TRUE(r.ok()) << c.name << (r.failures.empty() ? "" : ": " + r.failures.front());
    EXPECT_EQ(r.products_checked, c.dimension * c.dimension) << c.name;
  }
}

TEST(Stringy, ProductCheckOverProjectiveLine) {
  for (const auto& [name, b] : twisted_cases()) {
    const auto r = cr_product_check(b.sf, b.cr);
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_GT(r.associativity_checked, 0u);
  }
}

TEST(Stringy, TwistedSectorsMultiplyByAge) {
  const auto sf = fixtures::weighted(1, 3);
  const auto cr = cr_ring(sf, fixtures::over_point(sf));
  // 1_{1/3} * 1_{1/3} = 1_{2/3}.
  const auto a = basis_vector(cr, 1, Monomial(cr.sectors.sectors[1].ring.nvars(), 0));
  const auto sq = product_rule(sf, cr, a, a);
  const auto expected = basis_vector(cr, 2, Monomial(cr.sectors.sectors[2].ring.nvars(), 0));
  EXPECT_TRUE(sq == expected) << to_string(sq, cr);
  EXPECT_TRUE(product_transport(sf, cr, a, a) == sq);
}

TEST(Stringy, ObstructionSupportOnWeightedPlane) {
  const auto sf = fixtures::p112();
  const auto cr = cr_ring(sf, fixtures::over_point(sf));
  // The twisted sector is the midpoint of the cone {1, 2}; v + v + 0 = b_2 + b_3.
  ASSERT_EQ(cr.box.size(), 2u);
  const auto t = triple_coefficients(sf, cr.box[1], cr.box[1], cr.box[0]);
  ASSERT_TRUE(t.valid());
  EXPECT_TRUE(obstruction_support(t).empty());
  const auto ob = obstruction_euler_class(sf, cr, 1, 1, 0);
  EXPECT_EQ(ob.sector, 0u);
}

TEST(Stringy, SpectrumPointsSatisfyRelations) {
  for (const auto& c : fixtures::suite()) {
    const auto k = k_ring(c.sf, fixtures::over_point(c.sf));
    const auto r = spectrum_points(c.sf, k);
    EXPECT_EQ(r.points.size(), box_total(c.sf).size()) << c.name;
    EXPECT_EQ(r.relation_failures, 0u) << c.name;
    EXPECT_TRUE(r.distinct) << c.name;
    // Independent evaluation: substitute the values into every relation.
    for (const auto& p : r.points) {
      std::vector<Poly> images;
      for (const auto& v : p.values) images.push_back(Poly::constant(0, v));
      ASSERT_EQ(images.size(), k.ring.nvars());
      for (const auto& rel : k.ring.relations) EXPECT_TRUE(rel.substitute(images).is_zero()) << c.name;
      for (const auto& v : p.values) EXPECT_EQ(v.pow(static_cast<long>(r.field_order)), Scalar(1)) << c.name;
    }
  }
}

TEST(Stringy, SpectrumUntwistedPointIsTrivial) {
  const auto sf = fixtures::weighted(1, 2);
  const auto k = k_ring(sf, fixtures::over_point(sf));
  const auto r = spectrum_points(sf, k);
  ASSERT_EQ(r.points.size(), 2u);
  for (const auto& v : r.points[0].values) EXPECT_EQ(v, Scalar(1));
  EXPECT_EQ(r.field_order, 2u);
}

TEST(Stringy, ChernCharacterIsBijective) {
  for (const auto& c : fixtures::suite()) {
    const auto tw = fixtures::over_point(c.sf);
    const auto k = k_ring(c.sf, tw);
    const auto cr = cr_ring(c.sf, tw);
    const ChernContext ctx(c.sf, tw, k, cr);
    const auto m = chern_character(ctx);
    EXPECT_TRUE(m.bijective) << c.name;
    EXPECT_EQ(m.rank, c.dimension) << c.name;
  }
  for (const auto& [name, b] : twisted_cases()) {
    const ChernContext ctx(b.sf, b.twist, b.k, b.cr);
    EXPECT_TRUE(chern_character(ctx).bijective) << name;
  }
}

TEST(Stringy, ChernRingCheck) {
  for (const auto& c : fixtures::suite()) {
    const auto tw = fixtures::over_point(c.sf);
    const auto k = k_ring(c.sf, tw);
    const auto cr = cr_ring(c.sf, tw);
    const auto r = chern_ring_check(ChernContext(c.sf, tw, k, cr));
    EXPECT_TRUE(r.ok()) << c.name;
    EXPECT_EQ(r.pairs_checked, c.dimension * c.dimension) << c.name;
  }
  for (const auto& [name, b] : twisted_cases()) {
    const auto r = chern_ring_check(ChernContext(b.sf, b.twist, b.k, b.cr));
    EXPECT_TRUE(r.ok()) << name;
  }
}

TEST(Stringy, ChernNeedsReducedStack) {
  const FgAbelianGroup n(1, {Integer(2)});
  const StackyFan sf(n, Fan(1, {{1}, {-1}}, {{0}, {1}}), {GroupElement(n, {1, 1}), GroupElement(n, {-1, 0})});
  const auto tw = trivial_twist(point_base(), 1);
  const auto k = k_ring(sf, tw);
  const auto cr = cr_ring(sf, tw);
  try {
    ChernContext ctx(sf, tw, k, cr);
    chern_character(ctx);
    FAIL() << "expected NonReduced";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonReduced);
  }
}

TEST(Stringy, LambdaIdentityOnRandomClasses) {
  const auto sf = fixtures::p2();
  const auto tw = projective_twist(1, {1, 0});
  const auto k = k_ring(sf, tw);
  const auto cr = cr_ring(sf, tw);
  const ChernContext ctx(sf, tw, k, cr);
  std::mt19937 rng(99);
  for (int t = 0; t < 30; ++t) {
    const std::size_t sector = 0;
    const auto& ring = cr.sectors.sectors[sector].ring;
    std::vector<Poly> classes;
    const std::size_t count = 1 + rng() % 3;
    for (std::size_t c = 0; c < count; ++c) {
      Poly p = ring.zero();
      for (std::size_t v = 0; v < ring.nvars(); ++v)
        if (rng() % 2) p += ring.variable(ring.vars.name(v)).scaled(Scalar(static_cast<long>(rng() % 5) - 2));
      classes.push_back(p);
    }
    EXPECT_TRUE(lambda_identity_defect(ctx, sector, classes).is_zero());
  }
}

TEST(Stringy, GlobalClassesOfSectorVectors) {
  const auto sf = fixtures::weighted(1, 2);
  const auto cr = cr_ring(sf, fixtures::over_point(sf));
  const auto a = basis_vector(cr, 1, Monomial(cr.sectors.sectors[1].ring.nvars(), 0));
  EXPECT_EQ(to_global(cr, a), cr.global.variable("T1"));
  EXPECT_TRUE(to_global(cr, zero_vector(cr)).is_zero());
}

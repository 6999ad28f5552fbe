#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace stacktor;

namespace {

// Q[s, s_inv]/(relations) with s_inv the inverse of s.
RingPresentation laurent_line(const std::vector<std::string>& relations) {
  RingPresentation r;
  r.vars.add_unit("s");
  for (const auto& t : relations) r.relations.push_back(r.parse(t));
  for (auto& u : unit_relations(r.vars)) r.relations.push_back(u);
  finalize(r);
  return r;
}

// Images of s and s_inv in the target ring.
RingMapReport map_line(const RingPresentation& source, const RingPresentation& target, const std::string& image,
                       const std::string& inverse_image) {
  return ring_map_check({target.parse(image), target.parse(inverse_image)}, source.relations, target.gb, &source.gb);
}

std::vector<std::string> gb_strings(const RingPresentation& r) {
  std::vector<std::string> out;
  for (const auto& p : r.gb.polys) out.push_back(to_string(p, r.vars));
  return out;
}

}  // namespace

TEST(Presentations, SuiteDimensions) {
  for (const auto& c : fixtures::suite()) {
    const auto tw = fixtures::over_point(c.sf);
    const auto k = k_ring(c.sf, tw);
    const auto cr = cr_ring(c.sf, tw);
    EXPECT_EQ(k.ring.dimension(), c.dimension) << c.name;
    EXPECT_EQ(cr.global.dimension(), c.dimension) << c.name;
    EXPECT_EQ(cr.sectors.total_dimension, c.dimension) << c.name;
    EXPECT_EQ(oracle::sector_dimension_sum(c.sf), c.dimension) << c.name;
  }
}

TEST(Presentations, ProjectivePlaneIsTruncatedPolynomial) {
  const auto sf = fixtures::p2();
  const auto k = k_ring(sf, fixtures::over_point(sf));
  const auto model = laurent_line({"(s - 1)^3"});
  const auto m = map_line(model, k.ring, "x3", "x3_inv");
  EXPECT_TRUE(m.ok);
  EXPECT_EQ(m.bijective, std::optional<bool>(true));
}

TEST(Presentations, WeightedLinesMatchClosedForm) {
  for (long q : {2L, 3L, 5L}) {
    const auto sf = fixtures::weighted(1, q);
    const auto k = k_ring(sf, fixtures::over_point(sf));
    const auto model = laurent_line({"(1 - s)*(1 - s^" + std::to_string(q) + ")"});
    const auto m = map_line(model, k.ring, "x2", "x2_inv");
    EXPECT_TRUE(m.ok) << q;
    EXPECT_EQ(m.bijective, std::optional<bool>(true)) << q;
  }
}

TEST(Presentations, CyclicGerbesOverPoint) {
  for (long q : {2L, 3L, 4L}) {
    const auto sf = fixtures::bmu(q);
    const auto k = k_ring(sf, fixtures::over_point(sf));
    EXPECT_EQ(gb_strings(k.ring), std::vector<std::string>{"t1^" + std::to_string(q) + " - 1"});
  }
}

TEST(Presentations, SectorAgesGiveDegrees) {
  const auto sf = fixtures::weighted(1, 3);
  const auto cr = cr_ring(sf, fixtures::over_point(sf));
  ASSERT_EQ(cr.box.size(), 3u);
  EXPECT_FALSE(cr.t_var[0].has_value());
  EXPECT_EQ(cr.global.vars[*cr.t_var[1]].degree, Rational(2, 3));
  EXPECT_EQ(cr.global.vars[*cr.t_var[2]].degree, Rational(4, 3));
  for (const auto& s : cr.sectors.sectors) {
    EXPECT_EQ(s.shift, 2 * s.v.age());
    EXPECT_EQ(s.restriction.size(), sf.ray_count());
  }
  // Every relation of the global ring is homogeneous.
  for (const auto& p : cr.global.gb.polys) EXPECT_TRUE(weighted_degree(p, cr.global.vars).has_value());
}

TEST(Presentations, ProjectiveBundleIsFreeOfRankTwo) {
  const auto sf = fixtures::p1();
  for (long d : {0L, 1L, 2L, -1L}) {
    const auto tw = projective_twist(1, {d});
    const auto k = k_ring(sf, tw);
    const auto cr = cr_ring(sf, tw);
    EXPECT_EQ(free_rank_over_base(k.ring, tw.base.k, tw.base.k_augmentation), std::optional<std::size_t>(2)) << d;
    EXPECT_EQ(free_rank_over_base(cr.global, tw.base.h, tw.base.h_augmentation), std::optional<std::size_t>(2)) << d;
  }
}

TEST(Presentations, TwistNeedsUnimodularTopCone) {
  // With torsion in N the twist constants live on a top cone whose b-bar form a basis.
  const FgAbelianGroup n(1, {Integer(2)});
  const StackyFan sf(n, Fan(1, {{1}, {-1}}, {{0}, {1}}), {GroupElement(n, {2, 1}), GroupElement(n, {-2, 0})});
  ASSERT_TRUE(validate(sf).ok());
  try {
    k_ring(sf, projective_twist(1, {1}));
    FAIL() << "expected NoUnimodularTopCone";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoUnimodularTopCone);
  }
  EXPECT_NO_THROW(k_ring(sf, trivial_twist(projective_base(1), 1)));
}

TEST(Presentations, TwistValidation) {
  auto tw = projective_twist(1, {1});
  EXPECT_NO_THROW(tw.validate(1));
  EXPECT_THROW(tw.validate(2), Error);
  const auto inv = invert_in_quotient(tw.base.k, tw.base.k.parse("h^2"));
  EXPECT_EQ(tw.base.k.reduce(inv * tw.base.k.parse("h^2")), tw.base.k.one());
}

TEST(Presentations, GerbeRelationsAndIndependenceOfLineBundle) {
  const FgAbelianGroup n(0, {Integer(2), Integer(4)});
  const auto base = projective_base(1);
  const auto trivial = gerbe_presentations(n, base);
  const auto twisted = gerbe_presentations(n, base, base.k.parse("h"));
  EXPECT_EQ(gb_strings(trivial.k), (std::vector<std::string>{"h + h_inv - 2", "t1^2 - 1", "h_inv^2 - 2*h_inv + 1",
                                                             "t2^4 - 1"}));
  EXPECT_EQ(trivial.k.gb, twisted.k.gb);
  EXPECT_EQ(trivial.cr.gb, twisted.cr.gb);
  EXPECT_EQ(free_rank_over_base(trivial.k, base.k, base.k_augmentation), std::optional<std::size_t>(8));
}

TEST(Presentations, LiteralGerbeIdealIsNotReduced) {
  const FgAbelianGroup n(0, {Integer(2), Integer(4)});
  const auto g = gerbe_presentations(n, point_base());
  EXPECT_EQ(g.k_literal.dimension(), g.k.dimension());
  const Poly t1 = g.k_literal.variable("t1");
  EXPECT_FALSE(g.k_literal.reduce(t1).is_zero());
  EXPECT_TRUE(g.k_literal.reduce(t1 * t1).is_zero());
  // In the group ring t1 is a unit of order 2.
  EXPECT_EQ(g.k.reduce(g.k.variable("t1").pow(2)), g.k.one());
}

TEST(Presentations, GerbeCrImagesAreBijective) {
  const FgAbelianGroup n(0, {Integer(2), Integer(4)});
  const auto base = projective_base(1);
  const auto g = gerbe_presentations(n, base);
  const auto cr = cr_ring(g.sf, trivial_twist(base, 0));
  const auto m = ring_map_check(gerbe_cr_images(cr, g), cr.global.relations, g.cr.gb, &cr.global.gb);
  EXPECT_TRUE(m.ok);
  EXPECT_EQ(m.bijective, std::optional<bool>(true));
}

TEST(Presentations, ExtraDataDoesNotChangeTheRing) {
  for (const std::vector<IntVector>& extra : {std::vector<IntVector>{{5}}, std::vector<IntVector>{{-3}},
                                              std::vector<IntVector>{{5}, {-3}}}) {
    std::vector<IntVector> b{{1}, {-2}};
    b.insert(b.end(), extra.begin(), extra.end());
    const auto sf = fixtures::make(1, {{1}, {-1}}, {{0}, {1}}, b);
    const auto tw = fixtures::over_point(sf);
    const auto k = k_ring(sf, tw);
    const auto full = k_ring_full(sf, tw, k);
    const auto m = ring_map_check(full.to_minimal, full.full.ring.relations, k.ring.gb, &full.full.ring.gb);
    EXPECT_TRUE(m.ok);
    EXPECT_EQ(m.bijective, std::optional<bool>(true));
    EXPECT_EQ(k.ring.dimension(), 3u);
  }
}

TEST(Presentations, CharacterRingExponents) {
  const auto cr = character_ring(fixtures::weighted(1, 2));
  ASSERT_EQ(cr.x_exponents.size(), 2u);
  EXPECT_EQ(cr.dual.dg, FgAbelianGroup::free(1));
  // x1 = u^2 and x2 = u up to the sign of u.
  EXPECT_EQ(cr.x_exponents[0][0], 2 * cr.x_exponents[1][0]);
}

#include "oracles.hpp"
#include "stacktor/lattice.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace stacktor;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

std::vector<oracle::Column> columns_of(const IntMatrix& m) {
  std::vector<oracle::Column> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

}  // namespace

TEST(Lattice, DeterminantMatchesOracle) {
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_matrix(rng, 4, 4, 5);
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < 4; ++i) rows.push_back(m.row(i));
    EXPECT_EQ(m.determinant(), oracle::determinant(rows));
  }
}

TEST(Lattice, SmithFormFactorsTheMatrix) {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 5;
    const auto m = random_matrix(rng, r, c, 6);
    const auto s = smith_normal_form(m);
    EXPECT_EQ(s.U * m * s.V, s.D);
    EXPECT_EQ(s.U * s.U_inv, IntMatrix::identity(r));
    EXPECT_EQ(s.V * s.V_inv, IntMatrix::identity(c));
    EXPECT_TRUE(s.D.is_diagonal());
    for (std::size_t i = 0; i + 1 < s.rank; ++i) {
      EXPECT_GT(s.diagonal(i), 0);
      EXPECT_EQ(s.diagonal(i + 1) % s.diagonal(i), 0);
    }
    EXPECT_EQ(s.rank, oracle::rank(columns_of(m), r));
  }
}

TEST(Lattice, PresentedGroupMatchesDeterminantalDivisors) {
  std::mt19937 rng(13);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + t % 4, c = 1 + (t / 3) % 4;
    const auto m = random_matrix(rng, r, c, 4);
    const auto p = present(m);
    EXPECT_EQ(oracle::invariants_of(p.group), oracle::cokernel_invariants(columns_of(m), r));
    // to_group kills the relations and the section splits it.
    for (std::size_t j = 0; j < c; ++j) EXPECT_TRUE(p.group.is_zero(p.to_group.apply(m.column(j))));
    const auto composite = p.to_group * p.section;
    for (std::size_t g = 0; g < p.group.generators(); ++g) {
      IntVector e(p.group.generators(), 0);
      e[g] = 1;
      auto x = composite.apply(e);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= e[i];
      EXPECT_TRUE(p.group.is_zero(x));
    }
  }
}

TEST(Lattice, GroupArithmeticReducesTorsion) {
  const FgAbelianGroup g(1, {Integer(2), Integer(4)});
  EXPECT_EQ(g.torsion_order(), 8);
  EXPECT_EQ(g.exponent(), 4);
  EXPECT_EQ(g.torsion_elements().size(), 8u);
  const GroupElement a(g, {3, 1, 3});
  const GroupElement b(g, {-3, 1, 1});
  EXPECT_TRUE((a + b).is_zero());
  EXPECT_EQ((a.scaled(4)).coords(), (IntVector{12, 0, 0}));
  EXPECT_EQ(g.reduce({0, -1, -5}), (IntVector{0, 1, 3}));
}

TEST(Lattice, InvalidTorsionIsRejected) {
  EXPECT_THROW(FgAbelianGroup(0, {Integer(4), Integer(2)}), Error);
  EXPECT_THROW(FgAbelianGroup(0, {Integer(1)}), Error);
}

TEST(Lattice, HomomorphismMustRespectTorsion) {
  const FgAbelianGroup z2(0, {Integer(2)});
  const FgAbelianGroup z3(0, {Integer(3)});
  EXPECT_THROW(GroupHom(z2, z3, IntMatrix{{1}}), Error);
  EXPECT_NO_THROW(GroupHom(z2, FgAbelianGroup(0, {Integer(4)}), IntMatrix{{2}}));
}

TEST(Lattice, KernelAndSolve) {
  const IntMatrix m{{1, 2, 3}, {2, 4, 6}};
  const auto k = integer_kernel(m);
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_EQ(m * k, IntMatrix(2, 2));
  const auto x = solve_integer(m, {3, 6});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(m.apply(*x), (IntVector{3, 6}));
  EXPECT_FALSE(solve_integer(IntMatrix{{2}}, {1}).has_value());
}

TEST(Lattice, GaleDualOfWeightedLine) {
  const auto n = FgAbelianGroup::free(1);
  const GroupHom beta(FgAbelianGroup::free(2), n, IntMatrix{{1, -2}});
  const auto gd = gale_dual(beta);
  EXPECT_EQ(gd.dg, FgAbelianGroup::free(1));
  EXPECT_EQ(oracle::gale_exactness(beta, gd), std::vector<std::string>{});
  // beta^vee = +-(2, 1).
  const auto& bv = gd.beta_vee.matrix();
  EXPECT_EQ(bv(0, 0) * bv(0, 0), 4);
  EXPECT_EQ(bv(0, 1) * bv(0, 1), 1);
}

TEST(Lattice, GaleDualOfGerbe) {
  const FgAbelianGroup n(0, {Integer(2), Integer(4)});
  const GroupHom beta(FgAbelianGroup::free(1), n, IntMatrix{{1}, {1}});
  const auto gd = gale_dual(beta);
  EXPECT_EQ(gd.dg, FgAbelianGroup(1, {Integer(2)}));
  EXPECT_EQ(gd.mapping_cone, (IntMatrix{{1, 2, 0}, {1, 0, 4}}));
  EXPECT_EQ(oracle::gale_exactness(beta, gd), std::vector<std::string>{});
}

TEST(Lattice, GaleDualRequiresFiniteCokernel) {
  const GroupHom beta(FgAbelianGroup::free(1), FgAbelianGroup::free(2), IntMatrix{{1}, {0}});
  try {
    gale_dual(beta);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteCokernel);
  }
}

TEST(Lattice, GaleDualExactnessOnRandomMaps) {
  std::mt19937 rng(2024);
  std::size_t checked = 0;
  for (int t = 0; t < 200 && checked < 60; ++t) {
    const std::size_t d = 1 + t % 2;
    const std::size_t m = d + 1 + (t / 2) % 3;
    std::vector<Integer> torsion;
    if (t % 3 == 1) torsion = {Integer(2)};
    if (t % 3 == 2) torsion = {Integer(2), Integer(6)};
    const FgAbelianGroup n(d, torsion);
    IntMatrix b(n.generators(), m);
    std::uniform_int_distribution<int> dist(-3, 3);
    for (std::size_t i = 0; i < n.generators(); ++i)
      for (std::size_t j = 0; j < m; ++j) b(i, j) = i < d ? dist(rng) : Integer(mod_floor(dist(rng), torsion[i - d]));
    const GroupHom beta(FgAbelianGroup::free(m), n, b);
    GaleDual gd;
    try {
      gd = gale_dual(beta);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonFiniteCokernel);
      continue;
    }
    ++checked;
    EXPECT_EQ(oracle::gale_exactness(beta, gd), std::vector<std::string>{}) << b.to_string();
  }
  EXPECT_GE(checked, 30u);
}

TEST(Lattice, DualAndCharacterGroups) {
  const FgAbelianGroup g(2, {Integer(3)});
  EXPECT_EQ(dual_group(g), FgAbelianGroup::free(2));
  EXPECT_EQ(character_group(g), g);
  EXPECT_EQ(free_projection(g, {4, 5, 2}), (IntVector{4, 5}));
}

#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the Smith form, Box or Groebner code of the library.

#include "stacktor/stackyfan.hpp"

#include <set>
#include <string>
#include <vector>

namespace oracle {

using stacktor::Integer;
using stacktor::Rational;
using Column = std::vector<Integer>;

// Determinant by fraction-free elimination.
Integer determinant(std::vector<std::vector<Integer>> m);
// Rank over Q of the matrix with the given columns.
std::size_t rank(const std::vector<Column>& columns, std::size_t rows);

// Z^rows modulo the span of the columns, from determinantal divisors.
struct Invariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // factors above 1, divisibility order
  bool operator==(const Invariants&) const = default;
};
Invariants cokernel_invariants(const std::vector<Column>& columns, std::size_t rows);
Invariants invariants_of(const stacktor::FgAbelianGroup& g);

// Elements of N (torsion reduced) whose image lies in the half-open
// parallelepiped of b-bar over the cone, found by scanning a bounding box.
struct BoxPoint {
  Column coords;
  std::vector<Rational> alphas;  // per ray
  stacktor::Cone support;
};
std::vector<BoxPoint> box_brute_force(const stacktor::StackyFan& sf, const stacktor::Cone& cone);
std::vector<BoxPoint> box_total_brute_force(const stacktor::StackyFan& sf);

// Sum over Box of the number of maximal cones containing the support: the
// dimension of the Chen-Ruan cohomology of a complete stacky fan over a point.
std::size_t sector_dimension_sum(const stacktor::StackyFan& sf);

// Maximal cones of a complete simplicial fan containing a given cone.
std::size_t top_cones_containing(const stacktor::Fan& fan, const stacktor::Cone& c);

// Exactness checks of the Gale dual of beta : Z^m -> N against data built
// here from beta's matrix. Each returned string names a failed check.
std::vector<std::string> gale_exactness(const stacktor::GroupHom& beta, const stacktor::GaleDual& gd);

}  // namespace oracle

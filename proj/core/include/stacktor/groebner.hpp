#pragma once

// Buchberger's algorithm, normal forms and finite quotient rings.

#include "stacktor/poly.hpp"

#include <optional>
#include <vector>

namespace stacktor {

struct GroebnerOptions {
  std::size_t max_pairs = 20000;
};

struct GroebnerBasis {
  std::size_t nvars = 0;
  MonomialOrder order = MonomialOrder::Grevlex;
  std::vector<Poly> polys;  // reduced, monic, sorted by increasing leading monomial
  bool reduced = true;
  std::size_t pairs_processed = 0;

  bool is_unit_ideal() const;
  bool operator==(const GroebnerBasis& rhs) const { return nvars == rhs.nvars && order == rhs.order && polys == rhs.polys; }
};

// Throws Error(ResourceLimit) after max_pairs S-pairs.
GroebnerBasis groebner(const std::vector<Poly>& generators, std::size_t nvars,
                       MonomialOrder order = MonomialOrder::Grevlex, const GroebnerOptions& options = {});

Poly normal_form(const Poly& p, const GroebnerBasis& g);
bool ideal_contains(const GroebnerBasis& g, const Poly& p);

// The S-polynomial of two polynomials with the same order.
Poly s_polynomial(const Poly& f, const Poly& g);

struct QuotientBasis {
  bool finite = false;
  std::vector<Monomial> monomials;  // standard monomials in increasing order, when finite
  std::size_t dimension() const { return monomials.size(); }
};

QuotientBasis quotient_basis(const GroebnerBasis& g);

// Coordinates of the normal form of p in the standard monomials.
std::vector<Scalar> coordinates(const Poly& p, const GroebnerBasis& g, const QuotientBasis& basis);

struct RingMapReport {
  bool ok = true;
  std::optional<std::size_t> failing_relation;
  Poly failing_image;  // normal form of the failing relation's image
  std::optional<bool> bijective;
  std::size_t source_dimension = 0;
  std::size_t target_dimension = 0;
};

// images[i] is the image of source variable i, written in the target ring.
// Relations are checked against the target basis. When both quotients are
// finite the induced linear map is tested for bijectivity; unequal dimensions
// raise Error(DimensionMismatch).
RingMapReport ring_map_check(const std::vector<Poly>& images, const std::vector<Poly>& source_relations,
                             const GroebnerBasis& target, const GroebnerBasis* source = nullptr);

// Rank of a matrix over the scalar field.
std::size_t scalar_rank(const std::vector<std::vector<Scalar>>& rows);

}  // namespace stacktor

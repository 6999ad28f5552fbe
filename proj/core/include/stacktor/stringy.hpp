#pragma once

// Obstruction classes, spectrum points, the orbifold Chern character and the
// product checks between K-theory and Chen-Ruan cohomology.

#include "stacktor/presentations.hpp"

#include <string>
#include <vector>

namespace stacktor {

// {i : a_i = 2}.
Cone obstruction_support(const TripleCoefficients& t);

// An element of the sum of sector rings, one part per sector in Box order.
struct SectorVector {
  std::vector<Poly> parts;
};

SectorVector zero_vector(const CRRing& cr);
SectorVector basis_vector(const CRRing& cr, std::size_t sector, const Monomial& m);
bool operator==(const SectorVector& a, const SectorVector& b);
std::string to_string(const SectorVector& a, const CRRing& cr);

// Carries a class of one sector ring into another: base variables are kept,
// Y_j goes to the restriction of Y_j to the target sector.
Poly transport(const Poly& p, const SectorRing& from, const SectorRing& to);

// Index of the target sector box_inverse(v3) and the product of Y_i over the
// obstruction support, reduced in that sector.
struct ObstructionClass {
  std::size_t sector;
  Poly euler;
};
ObstructionClass obstruction_euler_class(const StackyFan& sf, const CRRing& cr, std::size_t v1, std::size_t v2,
                                         std::size_t v3);

// Product by lattice-point addition and decomposition into Box.
SectorVector product_rule(const StackyFan& sf, const CRRing& cr, const SectorVector& a, const SectorVector& b);
// Product by restriction to the 3-sector, obstruction class and pushforward.
SectorVector product_transport(const StackyFan& sf, const CRRing& cr, const SectorVector& a, const SectorVector& b);
// T_v times the class, in the global presentation.
Poly to_global(const CRRing& cr, const SectorVector& a);

struct ProductReport {
  std::size_t products_checked = 0;
  std::size_t mismatches = 0;          // rule vs transport
  std::size_t global_mismatches = 0;   // rule vs the global presentation
  std::size_t associativity_checked = 0;
  std::size_t associativity_failures = 0;
  bool global_map_bijective = false;
  std::vector<std::string> failures;
  bool ok() const {
    return mismatches == 0 && global_mismatches == 0 && associativity_failures == 0 && global_map_bijective;
  }
};

ProductReport cr_product_check(const StackyFan& sf, const CRRing& cr);

struct SpectrumPoint {
  BoxElement v;
  std::vector<Scalar> values;  // one per non-base K variable
};

struct SpectrumReport {
  std::vector<SpectrumPoint> points;
  unsigned field_order = 1;
  std::size_t relations_checked = 0;
  std::size_t relation_failures = 0;
  bool distinct = true;
};

// Base must be a point.
SpectrumReport spectrum_points(const StackyFan& sf, const KRing& k);

struct ChernMatrix {
  unsigned field_order = 1;
  std::vector<std::vector<Scalar>> matrix;  // rows: sector coordinates, columns: K basis
  std::size_t rank = 0;
  bool bijective = false;
};

// Per-sector Chern data shared by the checks below.
class ChernContext {
 public:
  ChernContext(const StackyFan& sf, const TwistSpec& twist, const KRing& k, const CRRing& cr);

  unsigned field_order() const noexcept { return order_; }
  // ch of the restriction of a K class to each sector, without the Todd factor.
  SectorVector ch(const Poly& k_class) const;
  // The same, multiplied by td^{-1}(T_v) in every sector.
  SectorVector ch_orb(const Poly& k_class) const;
  // td^{-1}(T_v) of a sector.
  const Poly& inverse_todd(std::size_t sector) const { return inverse_todd_[sector]; }

  // Evaluates a power series at a nilpotent class of a sector ring.
  Poly series_at(const Series& s, const Poly& p, std::size_t sector) const;

  const StackyFan& sf() const { return sf_; }
  const CRRing& cr() const { return cr_; }
  const KRing& k() const { return k_; }

 private:
  const StackyFan& sf_;
  const KRing& k_;
  const CRRing& cr_;
  unsigned order_ = 1;
  std::vector<std::vector<Poly>> images_;  // per sector, ch image of every K variable
  std::vector<Poly> inverse_todd_;
};

// Throws NonReduced for torsion N with a nonempty fan, InvalidArgument when
// the base has no Chern class data.
ChernMatrix chern_character(const ChernContext& ctx);

struct ChernRingReport {
  std::size_t lambda_identities = 0;
  std::size_t lambda_failures = 0;
  std::size_t todd_identities = 0;
  std::size_t todd_failures = 0;
  std::size_t todd_literal_failures = 0;  // the identity without the normal-bundle factor
  std::size_t pairs_checked = 0;
  std::size_t pair_failures = 0;
  std::vector<std::string> failures;
  bool ok() const { return lambda_failures == 0 && todd_failures == 0 && pair_failures == 0; }
};

ChernRingReport chern_ring_check(const ChernContext& ctx);

// td(S) * ch(lambda_{-1} S^*) - e(S) for a list of classes in a sector ring.
Poly lambda_identity_defect(const ChernContext& ctx, std::size_t sector, const std::vector<Poly>& classes);

}  // namespace stacktor

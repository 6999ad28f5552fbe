#pragma once

// Ring presentations: character ring, K-theory ring, Chen-Ruan cohomology
// ring and its sector decomposition, over a base described by a TwistSpec.

#include "stacktor/groebner.hpp"
#include "stacktor/poly.hpp"
#include "stacktor/stackyfan.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stacktor {

// A finitely presented ring with ordered variables. Leading `base_vars`
// variables come from the base ring.
struct RingPresentation {
  VarTable vars;
  std::vector<Poly> relations;
  std::size_t base_vars = 0;
  MonomialOrder order = MonomialOrder::Grevlex;

  GroebnerBasis gb;
  QuotientBasis qb;
  bool finalized = false;

  std::size_t nvars() const { return vars.size(); }
  Poly variable(std::string_view name) const { return var(vars, name, order); }
  Poly parse(std::string_view text) const { return parse_poly(text, vars, order); }
  Poly one() const { return stacktor::one(vars, order); }
  Poly zero() const { return Poly(vars.size(), order); }
  std::size_t dimension() const;  // requires finalize()
  Poly reduce(const Poly& p) const { return normal_form(p, gb); }
};

// Adds x*x_inv - 1 for every declared unit pair.
std::vector<Poly> unit_relations(const VarTable& vars, MonomialOrder order = MonomialOrder::Grevlex);
// Computes the Groebner basis and quotient basis.
void finalize(RingPresentation& ring, const GroebnerOptions& options = {});
// Copies a base-ring polynomial into a ring whose leading variables are the base variables.
Poly lift_base(const Poly& p, std::size_t nvars);

// The base B: K(B) and H*(B) over Q, both finite dimensional.
struct BaseRing {
  std::string name;
  RingPresentation k;
  RingPresentation h;
  std::vector<Poly> k_augmentation;  // generators of the rank ideal in K(B)
  std::vector<Poly> h_augmentation;  // generators of H^{>0}(B)
  // First Chern class of each K variable, when every K variable is a line bundle.
  std::optional<std::vector<Poly>> chern_classes;
};

BaseRing point_base();
// K = Q[h, h_inv]/((h-1)^{r+1}), H = Q[H]/(H^{r+1}); h = O(1), c1(h) = H.
BaseRing projective_base(unsigned r);

struct TwistSpec {
  BaseRing base;
  std::vector<Poly> xi;       // in base K, one per basis element of M
  std::vector<Poly> xi_dual;  // their inverses
  std::vector<Poly> c1;       // in base H, degree 2

  bool is_trivial() const;
  // Checks sizes against d, xi * xi_dual = 1 and nilpotency of c1.
  void validate(std::size_t d) const;
};

TwistSpec trivial_twist(const BaseRing& base, std::size_t d);
// xi_k = O(degrees[k]) on a projective-space base.
TwistSpec projective_twist(unsigned r, const std::vector<long>& degrees);
// Inverse of a unit of a finite-dimensional ring, by linear algebra.
Poly invert_in_quotient(const RingPresentation& ring, const Poly& p);

// The basis v_1..v_d of N-bar used for the twist: rays of a unimodular top
// cone, or the standard basis when the twist is trivial.
std::vector<IntVector> twist_basis(const StackyFan& sf, const TwistSpec& twist);

struct CharacterRing {
  GaleDual dual;                     // of beta_min
  RingPresentation ring;             // group ring of DG(beta_min), over Q
  std::vector<IntVector> x_exponents;
  std::vector<Poly> x;               // monomial of beta_min^vee(e_i)
  bool laurent_in_x = false;         // torsion-free N: presented directly in x_i
};

CharacterRing character_ring(const StackyFan& sf);

struct KRing {
  RingPresentation ring;
  std::vector<Poly> x;  // class of L_i for each ray
  bool laurent_in_x = false;
};

KRing k_ring(const StackyFan& sf, const TwistSpec& twist, const GroebnerOptions& options = {});

// Built from the full beta (extra data included): group ring of DG(beta)
// with (1 - x_j) for every extra vector j. `to_minimal` gives the images of
// its variables in k_ring(sf) induced by dropping the extra coordinates.
struct FullKRing {
  KRing full;
  std::vector<Poly> to_minimal;
};
FullKRing k_ring_full(const StackyFan& sf, const TwistSpec& twist, const KRing& minimal_ring,
                      const GroebnerOptions& options = {});

struct SectorRing {
  BoxElement v;
  RingPresentation ring;               // base H and Y_j for j in link(sigma(v))
  std::vector<std::size_t> link_rays;  // parent ray of each Y variable
  std::vector<Poly> restriction;       // Y_i restricted to the sector, for every ray i
  Rational shift;                      // 2 * age
};

struct SectorDecomposition {
  std::vector<SectorRing> sectors;
  std::size_t total_dimension = 0;
};

struct CRRing {
  RingPresentation global;
  std::vector<BoxElement> box;                      // box_total order
  std::vector<std::optional<std::size_t>> t_var;    // variable of T_v, none for v = 0
  std::vector<std::size_t> y_var;                   // variable of Y_i
  SectorDecomposition sectors;
};

SectorRing sector_ring(const StackyFan& sf, const TwistSpec& twist, const BoxElement& v,
                       const GroebnerOptions& options = {});
CRRing cr_ring(const StackyFan& sf, const TwistSpec& twist, const GroebnerOptions& options = {});

// Rank r when the ring is free of rank r over the base: dimension is
// r * dim(base) and the quotient by the augmentation ideal has dimension r.
std::optional<std::size_t> free_rank_over_base(const RingPresentation& ring, const RingPresentation& base,
                                               const std::vector<Poly>& augmentation,
                                               const GroebnerOptions& options = {});

struct GerbePresentations {
  StackyFan sf;
  RingPresentation k;
  RingPresentation cr;
  RingPresentation k_literal;  // relations t_j^{q_j} taken verbatim
  IntMatrix alpha;             // Gale dual of beta as a matrix
};

// N finite; beta = (1,...,1) as the single extra vector over an empty fan.
// `line_bundle` is the class of L in K(B); the presentations do not depend on it.
GerbePresentations gerbe_presentations(const FgAbelianGroup& n, const BaseRing& base,
                                       const std::optional<Poly>& line_bundle = std::nullopt,
                                       const GroebnerOptions& options = {});

// Images of the variables of the global CR ring of a gerbe (empty fan, finite
// N) in the t-form `gerbe.cr`: base classes are kept and T_v goes to prod_j t_j^{v_j}.
std::vector<Poly> gerbe_cr_images(const CRRing& cr, const GerbePresentations& gerbe);

}  // namespace stacktor

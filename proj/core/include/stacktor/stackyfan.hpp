#pragma once

// Stacky fans (N, fan, beta), Box elements and twisted-sector data.

#include "stacktor/fan.hpp"
#include "stacktor/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stacktor {

class StackyFan {
 public:
  StackyFan() = default;
  // Checks shapes only; use validate() for the stacky-fan conditions.
  StackyFan(FgAbelianGroup n, Fan fan, std::vector<GroupElement> b);

  const FgAbelianGroup& lattice() const noexcept { return n_; }
  const Fan& fan() const noexcept { return fan_; }
  // b_1..b_n for the rays, then the extra data.
  const std::vector<GroupElement>& b() const noexcept { return b_; }
  const GroupElement& b(std::size_t i) const { return b_.at(i); }

  std::size_t ray_count() const noexcept { return fan_.ray_count(); }
  std::size_t size() const noexcept { return b_.size(); }
  std::size_t extra_count() const noexcept { return b_.size() - fan_.ray_count(); }
  std::size_t rank() const noexcept { return n_.free_rank(); }

  // Image of b_i in N/N_tor.
  IntVector bbar(std::size_t i) const;
  GroupHom beta() const;
  GroupHom beta_min() const;

  bool operator==(const StackyFan& rhs) const = default;

 private:
  FgAbelianGroup n_;
  Fan fan_;
  std::vector<GroupElement> b_;
};

struct ValidationIssue {
  ErrorCode code;
  std::optional<std::size_t> index;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate(const StackyFan& sf);
// Throws the first validation issue as an Error.
void require_valid(const StackyFan& sf);

StackyFan minimal(const StackyFan& sf);
StackyFan reduced(const StackyFan& sf);

struct BoxElement {
  GroupElement v;
  Cone sigma;        // minimal cone containing v-bar
  RatVector alphas;  // one entry per ray; v-bar = sum alpha_i b-bar_i, alpha_i in [0,1)

  bool is_zero() const { return sigma.empty() && v.is_zero(); }
  Rational age() const;

  bool operator==(const BoxElement& rhs) const { return v == rhs.v; }
};

// Canonical ordering used for every Box listing.
bool box_order(const BoxElement& a, const BoxElement& b);

// Elements of N with v-bar in span(sigma) and coordinates in [0,1); they
// biject with the torsion subgroup of N(sigma) = N / <b_i : i in sigma>.
std::vector<BoxElement> box(const StackyFan& sf, const Cone& sigma);

// Union of box(sigma) over the maximal cones, deduplicated and ordered.
std::vector<BoxElement> box_total(const StackyFan& sf);

BoxElement box_inverse(const StackyFan& sf, const BoxElement& v);

// Box element of an arbitrary c in N with c-bar in the support: c = box + sum m_i b_i.
struct BoxDecomposition {
  BoxElement box;
  IntVector multiplicities;  // m_i >= 0, one per ray, zero off the minimal cone
  Cone cone;                 // minimal cone containing c-bar
};
BoxDecomposition decompose(const StackyFan& sf, const GroupElement& c);

struct QuotientStackyFan {
  StackyFan sf;
  Cone sigma;
  std::vector<std::size_t> parent_columns;  // parent index of each column of beta(sigma)
  std::size_t link_ray_count = 0;
  GroupHom projection;                      // N -> N(sigma)
};

QuotientStackyFan quotient(const StackyFan& sf, const Cone& sigma);

struct Sector {
  BoxElement v;
  QuotientStackyFan quotient;
};

std::vector<Sector> sectors(const StackyFan& sf);

enum class TripleFailure { NoCommonCone, NonIntegral, TorsionMismatch };

struct TripleCoefficients {
  std::optional<TripleFailure> failure;
  Cone sigma;    // sigma(v1, v2, v3)
  IntVector a;   // per ray; a_i in {0,1,2}
  bool valid() const { return !failure.has_value(); }
};

// Valid iff v1 + v2 + v3 = sum a_i b_i in N for integers a_i over a common cone.
TripleCoefficients triple_coefficients(const StackyFan& sf, const BoxElement& v1, const BoxElement& v2,
                                       const BoxElement& v3);

}  // namespace stacktor

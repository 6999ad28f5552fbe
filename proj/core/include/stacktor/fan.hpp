#pragma once

// Finite simplicial fans given by explicit ray vectors and maximal cones.

#include "stacktor/lattice.hpp"
#include "stacktor/numbers.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace stacktor {

// A cone is the sorted list of indices of its rays.
using Cone = std::vector<std::size_t>;

class Fan {
 public:
  Fan() = default;
  // Faces of the given cones are generated. Singletons of all rays are cones.
  // Throws Error(InvalidFan) when the data is not a simplicial fan.
  Fan(std::size_t ambient_rank, std::vector<IntVector> rays, std::vector<Cone> max_cones);

  std::size_t ambient_rank() const noexcept { return ambient_rank_; }
  std::size_t ray_count() const noexcept { return rays_.size(); }
  const std::vector<IntVector>& rays() const noexcept { return rays_; }
  const IntVector& ray(std::size_t i) const { return rays_.at(i); }

  // All cones, ordered by dimension and then lexicographically.
  const std::vector<Cone>& cones() const noexcept { return cones_; }
  const std::vector<Cone>& max_cones() const noexcept { return max_cones_; }
  std::vector<Cone> top_cones() const;

  bool is_cone(const Cone& c) const;
  bool is_cone_mask(std::uint64_t mask) const { return cone_masks_.count(mask) > 0; }

  // Rays of the cone as the columns of an ambient_rank x |c| matrix.
  IntMatrix ray_matrix(const Cone& c) const;

  // Coefficients of p in the rays of c, if p lies in the linear span of c.
  std::optional<RatVector> coordinates_in(const Cone& c, const RatVector& p) const;

  bool operator==(const Fan& rhs) const {
    return ambient_rank_ == rhs.ambient_rank_ && rays_ == rhs.rays_ && cones_ == rhs.cones_;
  }

 private:
  void check_simplicial() const;
  void check_intersections() const;

  std::size_t ambient_rank_ = 0;
  std::vector<IntVector> rays_;
  std::vector<Cone> max_cones_;
  std::vector<Cone> cones_;
  std::set<std::uint64_t> cone_masks_;
};

std::uint64_t cone_mask(const Cone& c);
Cone cone_from_mask(std::uint64_t mask);
Cone cone_union(const Cone& a, const Cone& b);
bool cone_contains(const Cone& big, const Cone& small);

// Divide by the gcd of the entries.
IntVector primitive(IntVector v);

// Smallest cone containing every point. Throws Error(NotInSupport) if a point
// lies in no cone and Error(NoCommonCone) if no single cone holds them all.
Cone minimal_cone_containing(const Fan& fan, const std::vector<RatVector>& points);

// {tau : tau and sigma disjoint, tau + sigma a cone}.
std::vector<Cone> link(const Fan& fan, const Cone& sigma);

struct QuotientFan {
  Fan fan;
  std::vector<std::size_t> parent_rays;  // new ray k is the image of parent ray parent_rays[k]
  IntMatrix projection;                  // Z^d -> Z^{d - dim sigma}, kernel spanned rationally by sigma
};

QuotientFan quotient_fan(const Fan& fan, const Cone& sigma);
// Same, with a caller-provided lattice projection whose rational kernel is span(sigma).
QuotientFan quotient_fan(const Fan& fan, const Cone& sigma, const IntMatrix& projection);

// Minimal subsets of rays that are not cones.
std::vector<Cone> primitive_nonfaces(const Fan& fan);

// Each facet of a top-dimensional cone lies in exactly two top cones, and every
// maximal cone is top-dimensional.
bool is_complete(const Fan& fan);

}  // namespace stacktor

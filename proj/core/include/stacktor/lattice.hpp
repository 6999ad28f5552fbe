#pragma once

// Exact integer matrices and finitely generated abelian groups.
//
// Every group is kept in invariant-factor coordinates: an element of
// Z^r + Z/q_1 + ... + Z/q_s is a vector of r free coordinates followed by s
// torsion residues, with q_1 | q_2 | ... | q_s and each q_j >= 2.

#include "stacktor/errors.hpp"
#include "stacktor/numbers.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace stacktor {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& columns);
  static IntMatrix from_rows(std::size_t cols, const std::vector<IntVector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Integer>& entries() const noexcept { return entries_; }

  Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  IntVector row(std::size_t i) const;
  IntVector column(std::size_t j) const;
  IntMatrix transpose() const;
  IntMatrix select_rows(const std::vector<std::size_t>& which) const;
  IntMatrix select_columns(const std::vector<std::size_t>& which) const;
  IntMatrix hstack(const IntMatrix& right) const;
  IntMatrix vstack(const IntMatrix& below) const;

  IntVector apply(const IntVector& x) const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix& rhs) const = default;

  bool is_diagonal() const;
  Integer determinant() const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix U_inv;
  IntMatrix V_inv;
  std::size_t rank = 0;

  Integer diagonal(std::size_t i) const { return D(i, i); }
};

// U * M * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal.
// Pivot: the smallest nonzero absolute value, first found in a row-then-column
// sweep of the active block.
SmithForm smith_normal_form(const IntMatrix& m);

// Z-basis of {x in Z^cols : m x = 0}, as columns.
IntMatrix integer_kernel(const IntMatrix& m);

// Integer solution of m x = b, if one exists.
std::optional<IntVector> solve_integer(const IntMatrix& m, const IntVector& b);

std::size_t rational_rank(const IntMatrix& m);

class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;
  FgAbelianGroup(std::size_t free_rank, std::vector<Integer> torsion);

  static FgAbelianGroup free(std::size_t rank) { return FgAbelianGroup(rank, {}); }
  static FgAbelianGroup trivial() { return FgAbelianGroup(0, {}); }

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<Integer>& torsion() const noexcept { return torsion_; }
  std::size_t generators() const noexcept { return free_rank_ + torsion_.size(); }

  bool is_finite() const noexcept { return free_rank_ == 0; }
  bool is_trivial() const noexcept { return free_rank_ == 0 && torsion_.empty(); }
  bool is_torsion_free() const noexcept { return torsion_.empty(); }
  // |torsion subgroup|; the order of the group when finite.
  Integer torsion_order() const;
  Integer exponent() const;

  // Diagonal relation matrix (generators x torsion count) presenting the group.
  IntMatrix relation_matrix() const;

  // Reduce torsion coordinates into [0, q_j).
  IntVector reduce(IntVector coords) const;
  bool is_zero(const IntVector& coords) const;

  // All elements of the torsion subgroup, in lexicographic residue order.
  std::vector<IntVector> torsion_elements() const;

  std::string to_string() const;

  bool operator==(const FgAbelianGroup& rhs) const = default;

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> torsion_;
};

class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(FgAbelianGroup parent, IntVector coords);

  static GroupElement zero(const FgAbelianGroup& parent);

  const FgAbelianGroup& parent() const noexcept { return parent_; }
  const IntVector& coords() const noexcept { return coords_; }
  IntVector free_part() const;
  IntVector torsion_part() const;
  bool is_zero() const { return parent_.is_zero(coords_); }

  GroupElement operator+(const GroupElement& rhs) const;
  GroupElement operator-(const GroupElement& rhs) const;
  GroupElement operator-() const;
  GroupElement scaled(const Integer& k) const;

  bool operator==(const GroupElement& rhs) const = default;
  auto operator<=>(const GroupElement& rhs) const { return coords_ <=> rhs.coords_; }

  std::string to_string() const;

 private:
  FgAbelianGroup parent_;
  IntVector coords_;
};

// A homomorphism written in the invariant-factor coordinates of both groups.
// Column j is the image of the j-th generator of the domain.
class GroupHom {
 public:
  GroupHom() = default;
  // Throws Error(InvalidArgument) if the matrix does not respect the domain's
  // torsion relations.
  GroupHom(FgAbelianGroup domain, FgAbelianGroup codomain, IntMatrix matrix);

  const FgAbelianGroup& domain() const noexcept { return domain_; }
  const FgAbelianGroup& codomain() const noexcept { return codomain_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  GroupElement operator()(const GroupElement& x) const;
  IntVector apply(const IntVector& x) const;
  GroupHom compose_after(const GroupHom& first) const;  // this o first
  bool is_zero() const;

  bool operator==(const GroupHom& rhs) const = default;

 private:
  FgAbelianGroup domain_;
  FgAbelianGroup codomain_;
  IntMatrix matrix_;
};

// The group Z^g / (column span of relations), normalized, together with the
// quotient map from Z^g and a set-theoretic section back to Z^g.
struct PresentedGroup {
  FgAbelianGroup group;
  IntMatrix to_group;  // generators() x g
  IntMatrix section;   // g x generators(); to_group * section = id on group coords
};

PresentedGroup present(const IntMatrix& relations);

struct Cokernel {
  FgAbelianGroup group;
  GroupHom projection;
  IntMatrix section;  // codomain coords of a lift of each cokernel generator
};

Cokernel cokernel(const GroupHom& f);

struct GaleDual {
  FgAbelianGroup dg;
  GroupHom beta_vee;  // Z^m -> DG(beta)
  // [B | Q]: the lift of beta next to the torsion relations of N. DG(beta) is
  // the cokernel of its transpose on Z^{m+s}.
  IntMatrix mapping_cone;
  IntMatrix to_dg;    // Z^{m+s} -> DG coords
  IntMatrix section;  // DG coords -> Z^{m+s}
};

// Throws Error(NonFiniteCokernel) when beta has infinite cokernel.
GaleDual gale_dual(const GroupHom& beta);

// Hom(A, Z).
FgAbelianGroup dual_group(const FgAbelianGroup& a);
// Hom(A, Q/Z) + Hom(A, Z): the character data, isomorphic to A itself.
FgAbelianGroup character_group(const FgAbelianGroup& a);

// Coordinates of a vector modulo the torsion subgroup: the first free_rank entries.
IntVector free_projection(const FgAbelianGroup& group, const IntVector& coords);

}  // namespace stacktor

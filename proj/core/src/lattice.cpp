#include "stacktor/lattice.hpp"

#include "stacktor/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace stacktor {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteCokernel: return "NonFiniteCokernel";
    case ErrorCode::NotInSupport: return "NotInSupport";
    case ErrorCode::NoCommonCone: return "NoCommonCone";
    case ErrorCode::InvalidFan: return "InvalidFan";
    case ErrorCode::RayMismatch: return "RayMismatch";
    case ErrorCode::NoUnimodularTopCone: return "NoUnimodularTopCone";
    case ErrorCode::NonReduced: return "NonReduced";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::InvalidArgument, "IntMatrix: entry count does not match shape");
  }
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "IntMatrix: ragged rows");
    for (long v : r) entries_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error(ErrorCode::InvalidArgument, "IntMatrix: column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(std::size_t cols, const std::vector<IntVector>& rows) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::InvalidArgument, "IntMatrix: row length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& which) const {
  IntMatrix out(which.size(), cols_);
  for (std::size_t k = 0; k < which.size(); ++k)
    for (std::size_t j = 0; j < cols_; ++j) out(k, j) = (*this)(which[k], j);
  return out;
}

IntMatrix IntMatrix::select_columns(const std::vector<std::size_t>& which) const {
  IntMatrix out(rows_, which.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < which.size(); ++k) out(i, k) = (*this)(i, which[k]);
  return out;
}

IntMatrix IntMatrix::hstack(const IntMatrix& right) const {
  if (right.rows_ != rows_) throw Error(ErrorCode::InvalidArgument, "hstack: row mismatch");
  IntMatrix out(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) out(i, cols_ + j) = right(i, j);
  }
  return out;
}

IntMatrix IntMatrix::vstack(const IntMatrix& below) const {
  if (below.cols_ != cols_) throw Error(ErrorCode::InvalidArgument, "vstack: column mismatch");
  IntMatrix out(rows_ + below.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < below.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(rows_ + i, j) = below(i, j);
  return out;
}

IntVector IntMatrix::apply(const IntVector& x) const {
  if (x.size() != cols_) throw Error(ErrorCode::InvalidArgument, "apply: length mismatch");
  IntVector y(rows_, Integer(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
  return y;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorCode::InvalidArgument, "matrix product: shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

// Bareiss fraction-free elimination.
Integer IntMatrix::determinant() const {
  if (rows_ != cols_) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix a = *this;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

class SmithWorker {
 public:
  explicit SmithWorker(const IntMatrix& m)
      : a(m),
        u(IntMatrix::identity(m.rows())),
        u_inv(IntMatrix::identity(m.rows())),
        v(IntMatrix::identity(m.cols())),
        v_inv(IntMatrix::identity(m.cols())) {}

  // row_i += q * row_t
  void row_add(std::size_t i, std::size_t t, const Integer& q) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += q * a(t, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) += q * u(t, j);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, t) -= q * u_inv(r, i);
  }
  void row_swap(std::size_t i, std::size_t t) {
    if (i == t) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(t, j));
    for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(i, j), u(t, j));
    for (std::size_t r = 0; r < u_inv.rows(); ++r) std::swap(u_inv(r, i), u_inv(r, t));
  }
  void row_negate(std::size_t t) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(t, j) = -a(t, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(t, j) = -u(t, j);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, t) = -u_inv(r, t);
  }
  // col_j += q * col_t
  void col_add(std::size_t j, std::size_t t, const Integer& q) {
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) += q * a(i, t);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) += q * v(i, t);
    for (std::size_t c = 0; c < v_inv.cols(); ++c) v_inv(t, c) -= q * v_inv(j, c);
  }
  void col_swap(std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, j), a(i, t));
    for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, j), v(i, t));
    for (std::size_t c = 0; c < v_inv.cols(); ++c) std::swap(v_inv(j, c), v_inv(t, c));
  }

  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    Integer best;
    for (std::size_t i = t; i < a.rows(); ++i) {
      for (std::size_t j = t; j < a.cols(); ++j) {
        if (a(i, j) == 0) continue;
        Integer mag = abs(a(i, j));
        if (!found || mag < best) {
          found = true;
          best = mag;
          pi = i;
          pj = j;
        }
      }
    }
    return found;
  }

  std::size_t run() {
    const std::size_t diag = std::min(a.rows(), a.cols());
    std::size_t t = 0;
    while (t < diag) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(t, pi, pj)) break;
      row_swap(t, pi);
      col_swap(t, pj);
      const Integer p = a(t, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        row_add(i, t, -(a(i, t) / p));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        col_add(j, t, -(a(t, j) / p));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows() && divides; ++i) {
        for (std::size_t j = t + 1; j < a.cols(); ++j) {
          if (a(i, j) % p != 0) {
            row_add(t, i, Integer(1));
            divides = false;
            break;
          }
        }
      }
      if (!divides) continue;
      if (p < 0) row_negate(t);
      ++t;
    }
    return t;
  }

  IntMatrix a, u, u_inv, v, v_inv;
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithWorker w(m);
  const std::size_t rank = w.run();
  return SmithForm{std::move(w.u), std::move(w.a), std::move(w.v), std::move(w.u_inv),
                   std::move(w.v_inv), rank};
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const auto snf = smith_normal_form(m);
  std::vector<std::size_t> cols;
  for (std::size_t j = snf.rank; j < m.cols(); ++j) cols.push_back(j);
  return snf.V.select_columns(cols);
}

std::optional<IntVector> solve_integer(const IntMatrix& m, const IntVector& b) {
  const auto snf = smith_normal_form(m);
  const IntVector ub = snf.U.apply(b);
  IntVector y(m.cols(), Integer(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i < snf.rank) {
      const Integer& d = snf.D(i, i);
      if (ub[i] % d != 0) return std::nullopt;
      y[i] = ub[i] / d;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V.apply(y);
}

std::size_t rational_rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

// ---------------------------------------------------------------------------
// FgAbelianGroup

FgAbelianGroup::FgAbelianGroup(std::size_t free_rank, std::vector<Integer> torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
  for (std::size_t j = 0; j < torsion_.size(); ++j) {
    if (torsion_[j] < 2) throw Error(ErrorCode::InvalidArgument, "invariant factor below 2");
    if (j + 1 < torsion_.size() && torsion_[j + 1] % torsion_[j] != 0) {
      throw Error(ErrorCode::InvalidArgument, "invariant factors must form a divisibility chain");
    }
  }
}

Integer FgAbelianGroup::torsion_order() const {
  Integer o = 1;
  for (const auto& q : torsion_) o *= q;
  return o;
}

Integer FgAbelianGroup::exponent() const { return torsion_.empty() ? Integer(1) : torsion_.back(); }

IntMatrix FgAbelianGroup::relation_matrix() const {
  IntMatrix q(generators(), torsion_.size());
  for (std::size_t j = 0; j < torsion_.size(); ++j) q(free_rank_ + j, j) = torsion_[j];
  return q;
}

IntVector FgAbelianGroup::reduce(IntVector coords) const {
  if (coords.size() != generators()) {
    throw Error(ErrorCode::InvalidArgument, "group element has wrong coordinate count");
  }
  for (std::size_t j = 0; j < torsion_.size(); ++j) {
    coords[free_rank_ + j] = mod_floor(coords[free_rank_ + j], torsion_[j]);
  }
  return coords;
}

bool FgAbelianGroup::is_zero(const IntVector& coords) const {
  const auto r = reduce(coords);
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

std::vector<IntVector> FgAbelianGroup::torsion_elements() const {
  std::vector<IntVector> out;
  IntVector cur(generators(), Integer(0));
  const std::size_t s = torsion_.size();
  while (true) {
    out.push_back(cur);
    std::size_t k = s;
    while (k > 0) {
      auto& digit = cur[free_rank_ + k - 1];
      digit += 1;
      if (digit < torsion_[k - 1]) break;
      digit = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

std::string FgAbelianGroup::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (free_rank_ > 0) {
    os << "Z^" << free_rank_;
    first = false;
  }
  for (const auto& q : torsion_) {
    os << (first ? "" : " + ") << "Z/" << q;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement::GroupElement(FgAbelianGroup parent, IntVector coords)
    : parent_(std::move(parent)), coords_(parent_.reduce(std::move(coords))) {}

GroupElement GroupElement::zero(const FgAbelianGroup& parent) {
  return GroupElement(parent, IntVector(parent.generators(), Integer(0)));
}

IntVector GroupElement::free_part() const {
  return IntVector(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(parent_.free_rank()));
}

IntVector GroupElement::torsion_part() const {
  return IntVector(coords_.begin() + static_cast<std::ptrdiff_t>(parent_.free_rank()), coords_.end());
}

GroupElement GroupElement::operator+(const GroupElement& rhs) const {
  if (!(parent_ == rhs.parent_)) throw Error(ErrorCode::InvalidArgument, "adding elements of different groups");
  IntVector c = coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += rhs.coords_[i];
  return GroupElement(parent_, std::move(c));
}

GroupElement GroupElement::operator-() const {
  IntVector c = coords_;
  for (auto& x : c) x = -x;
  return GroupElement(parent_, std::move(c));
}

GroupElement GroupElement::operator-(const GroupElement& rhs) const { return *this + (-rhs); }

GroupElement GroupElement::scaled(const Integer& k) const {
  IntVector c = coords_;
  for (auto& x : c) x *= k;
  return GroupElement(parent_, std::move(c));
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// GroupHom

GroupHom::GroupHom(FgAbelianGroup domain, FgAbelianGroup codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.generators() || matrix_.cols() != domain_.generators()) {
    throw Error(ErrorCode::InvalidArgument, "GroupHom: matrix shape does not match groups");
  }
  const std::size_t r = codomain_.free_rank();
  for (std::size_t t = 0; t < codomain_.torsion().size(); ++t)
    for (std::size_t j = 0; j < matrix_.cols(); ++j)
      matrix_(r + t, j) = mod_floor(matrix_(r + t, j), codomain_.torsion()[t]);
  for (std::size_t t = 0; t < domain_.torsion().size(); ++t) {
    IntVector image = matrix_.column(domain_.free_rank() + t);
    for (auto& x : image) x *= domain_.torsion()[t];
    if (!codomain_.is_zero(image)) {
      throw Error(ErrorCode::InvalidArgument, "GroupHom: torsion relation of the domain is not respected");
    }
  }
}

IntVector GroupHom::apply(const IntVector& x) const { return codomain_.reduce(matrix_.apply(x)); }

GroupElement GroupHom::operator()(const GroupElement& x) const {
  if (!(x.parent() == domain_)) throw Error(ErrorCode::InvalidArgument, "GroupHom: element outside domain");
  return GroupElement(codomain_, matrix_.apply(x.coords()));
}

GroupHom GroupHom::compose_after(const GroupHom& first) const {
  if (!(first.codomain_ == domain_)) throw Error(ErrorCode::InvalidArgument, "compose: groups do not match");
  return GroupHom(first.domain_, codomain_, matrix_ * first.matrix_);
}

bool GroupHom::is_zero() const {
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!codomain_.is_zero(matrix_.column(j))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Presentations, cokernels, Gale duals

PresentedGroup present(const IntMatrix& relations) {
  const std::size_t g = relations.rows();
  const auto snf = smith_normal_form(relations);
  std::vector<std::size_t> free_rows, torsion_rows;
  std::vector<Integer> torsion;
  for (std::size_t i = 0; i < g; ++i) {
    if (i >= snf.rank) {
      free_rows.push_back(i);
    } else if (snf.D(i, i) > 1) {
      torsion_rows.push_back(i);
      torsion.push_back(snf.D(i, i));
    }
  }
  std::vector<std::size_t> order = free_rows;
  order.insert(order.end(), torsion_rows.begin(), torsion_rows.end());
  FgAbelianGroup group(free_rows.size(), torsion);
  IntMatrix to_group = snf.U.select_rows(order);
  for (std::size_t t = 0; t < torsion.size(); ++t)
    for (std::size_t j = 0; j < g; ++j)
      to_group(free_rows.size() + t, j) = mod_floor(to_group(free_rows.size() + t, j), torsion[t]);
  IntMatrix section = snf.U_inv.select_columns(order);
  return PresentedGroup{std::move(group), std::move(to_group), std::move(section)};
}

Cokernel cokernel(const GroupHom& f) {
  const auto& c = f.codomain();
  const IntMatrix relations = f.matrix().hstack(c.relation_matrix());
  auto p = present(relations);
  GroupHom projection(c, p.group, p.to_group);
  return Cokernel{std::move(p.group), std::move(projection), std::move(p.section)};
}

GaleDual gale_dual(const GroupHom& beta) {
  const auto& n = beta.codomain();
  const std::size_t m = beta.domain().generators();
  if (!beta.domain().is_torsion_free()) {
    throw Error(ErrorCode::InvalidArgument, "gale_dual: domain must be free");
  }
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < n.free_rank(); ++i) free_rows.push_back(i);
  if (rational_rank(beta.matrix().select_rows(free_rows)) < n.free_rank()) {
    throw Error(ErrorCode::NonFiniteCokernel, "gale_dual: beta has infinite cokernel");
  }
  IntMatrix cone = beta.matrix().hstack(n.relation_matrix());
  auto p = present(cone.transpose());
  std::vector<std::size_t> first_m;
  for (std::size_t j = 0; j < m; ++j) first_m.push_back(j);
  GroupHom beta_vee(FgAbelianGroup::free(m), p.group, p.to_group.select_columns(first_m));
  return GaleDual{std::move(p.group), std::move(beta_vee), std::move(cone), std::move(p.to_group),
                  std::move(p.section)};
}

FgAbelianGroup dual_group(const FgAbelianGroup& a) { return FgAbelianGroup::free(a.free_rank()); }

FgAbelianGroup character_group(const FgAbelianGroup& a) { return a; }

IntVector free_projection(const FgAbelianGroup& group, const IntVector& coords) {
  return IntVector(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(group.free_rank()));
}

}  // namespace stacktor

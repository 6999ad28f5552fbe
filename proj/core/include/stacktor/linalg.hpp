#pragma once

// Dense linear algebra over an exact field. The field type needs +, -, *, /,
// unary minus, construction from int and an `is_zero(const F&)` overload.

#include "stacktor/numbers.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace stacktor {

inline bool is_zero(const Rational& q) { return q == 0; }

template <class F>
using FieldMatrix = std::vector<std::vector<F>>;

template <class F>
struct RowEchelon {
  FieldMatrix<F> reduced;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form by Gauss-Jordan elimination.
template <class F>
RowEchelon<F> rref(FieldMatrix<F> a) {
  RowEchelon<F> out;
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(a[p][c])) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    const F inv = F(1) / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a[i][c])) continue;
      const F f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.reduced = std::move(a);
  return out;
}

template <class F>
std::size_t rank(const FieldMatrix<F>& a) {
  return rref(a).pivot_cols.size();
}

// Basis of {x : a x = 0}.
template <class F>
FieldMatrix<F> nullspace(const FieldMatrix<F>& a, std::size_t cols) {
  FieldMatrix<F> basis;
  if (a.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<F> e(cols, F(0));
      e[j] = F(1);
      basis.push_back(std::move(e));
    }
    return basis;
  }
  const auto ech = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(cols, F(0));
    v[free] = F(1);
    for (std::size_t k = 0; k < ech.pivot_cols.size(); ++k) {
      v[ech.pivot_cols[k]] = -ech.reduced[k][free];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of a x = b, or nullopt when inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const FieldMatrix<F>& a, const std::vector<F>& b, std::size_t cols) {
  FieldMatrix<F> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  const auto ech = rref(aug);
  std::vector<F> x(cols, F(0));
  for (std::size_t k = 0; k < ech.pivot_cols.size(); ++k) {
    if (ech.pivot_cols[k] == cols) return std::nullopt;
    x[ech.pivot_cols[k]] = ech.reduced[k][cols];
  }
  return x;
}

}  // namespace stacktor

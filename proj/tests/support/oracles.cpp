#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace oracle {

namespace {

using Matrix = std::vector<std::vector<Integer>>;

Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

Integer gcd_of(Integer a, Integer b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

std::vector<Column> torsion_elements(const stacktor::FgAbelianGroup& g) {
  std::vector<Column> out{Column{}};
  for (const auto& q : g.torsion()) {
    std::vector<Column> next;
    for (const auto& prefix : out) {
      for (Integer r = 0; r < q; ++r) {
        auto c = prefix;
        c.push_back(r);
        next.push_back(c);
      }
    }
    out = std::move(next);
  }
  return out;
}


struct LatticePoint {
  Column point;
  std::vector<Rational> t;
};

// Integer points sum t_j g_j with t in [0,1)^k, for independent g_j in Z^D.
// Scans the coordinates of an invertible k x k block M and checks the rest;
// t = adj(M) y / det(M).
std::vector<LatticePoint> parallelepiped_points(const std::vector<Column>& gens, std::size_t dim) {
  const std::size_t k = gens.size();
  std::vector<std::size_t> pivot_rows;
  bool found = false;
  for_each_subset(dim, k, [&](const std::vector<std::size_t>& rs) {
    if (found) return;
    Matrix block(k, std::vector<Integer>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) block[i][j] = gens[j][rs[i]];
    if (determinant(block) != 0) {
      pivot_rows = rs;
      found = true;
    }
  });
  std::vector<LatticePoint> out;
  if (!found) return out;
  Matrix block(k, std::vector<Integer>(k));
  Column lo(k, 0), hi(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      block[i][j] = gens[j][pivot_rows[i]];
      if (block[i][j] < 0) lo[i] += block[i][j];
      else hi[i] += block[i][j];
    }
  }
  Integer det = determinant(block);
  // adj[j][i] = (-1)^{i+j} det(block without row i and column j).
  Matrix adj(k, std::vector<Integer>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Matrix minor;
      for (std::size_t r = 0; r < k; ++r) {
        if (r == i) continue;
        std::vector<Integer> row;
        for (std::size_t c = 0; c < k; ++c)
          if (c != j) row.push_back(block[r][c]);
        minor.push_back(row);
      }
      adj[j][i] = ((i + j) % 2 ? -1 : 1) * determinant(minor);
    }
  }
  if (det < 0) {
    det = -det;
    for (auto& row : adj)
      for (auto& x : row) x = -x;
  }
  Column y(k), num(k);
  std::function<void(std::size_t)> scan = [&](std::size_t a) {
    if (a < k) {
      for (Integer x = lo[a]; x <= hi[a]; ++x) {
        y[a] = x;
        scan(a + 1);
      }
      return;
    }
    for (std::size_t j = 0; j < k; ++j) {
      num[j] = 0;
      for (std::size_t i = 0; i < k; ++i) num[j] += adj[j][i] * y[i];
      if (num[j] < 0 || num[j] >= det) return;
    }
    Column p(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      Integer s = 0;
      for (std::size_t j = 0; j < k; ++j) s += num[j] * gens[j][c];
      if (s % det != 0) return;
      p[c] = s / det;
    }
    std::vector<Rational> t(k);
    for (std::size_t j = 0; j < k; ++j) t[j] = Rational(num[j], det);
    out.push_back({p, t});
  };
  scan(0);
  return out;
}

}  // namespace

Integer determinant(Matrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::size_t rank(const std::vector<Column>& columns, std::size_t rows) {
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m[i][j] = Rational(columns[j][i]);
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns.size() && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < columns.size(); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

Invariants cokernel_invariants(const std::vector<Column>& columns, std::size_t rows) {
  const std::size_t r = rank(columns, rows);
  Invariants inv;
  inv.free_rank = rows - r;
  Integer previous = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    Integer d = 0;
    for_each_subset(rows, k, [&](const std::vector<std::size_t>& rs) {
      for_each_subset(columns.size(), k, [&](const std::vector<std::size_t>& cs) {
        Matrix minor(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor[i][j] = columns[cs[j]][rs[i]];
        d = gcd_of(d, determinant(minor));
      });
    });
    const Integer s = d / previous;
    if (s > 1) inv.torsion.push_back(s);
    previous = d;
  }
  return inv;
}

Invariants invariants_of(const stacktor::FgAbelianGroup& g) {
  Invariants inv;
  inv.free_rank = g.free_rank();
  for (const auto& q : g.torsion())
    if (q > 1) inv.torsion.push_back(q);
  return inv;
}

std::vector<BoxPoint> box_brute_force(const stacktor::StackyFan& sf, const stacktor::Cone& cone) {
  std::vector<Column> gens;
  for (auto i : cone) gens.push_back(sf.bbar(i));
  std::vector<BoxPoint> out;
  const auto torsion = torsion_elements(sf.lattice());
  for (const auto& lp : parallelepiped_points(gens, sf.rank())) {
    BoxPoint bp;
    bp.alphas.assign(sf.ray_count(), Rational(0));
    for (std::size_t j = 0; j < cone.size(); ++j) {
      bp.alphas[cone[j]] = lp.t[j];
      if (lp.t[j] > 0) bp.support.push_back(cone[j]);
    }
    for (const auto& tor : torsion) {
      bp.coords = lp.point;
      bp.coords.insert(bp.coords.end(), tor.begin(), tor.end());
      out.push_back(bp);
    }
  }
  return out;
}

std::vector<BoxPoint> box_total_brute_force(const stacktor::StackyFan& sf) {
  std::map<Column, BoxPoint> seen;
  for (const auto& c : sf.fan().max_cones())
    for (auto& bp : box_brute_force(sf, c)) seen.emplace(bp.coords, bp);
  if (sf.fan().max_cones().empty())
    for (auto& bp : box_brute_force(sf, {})) seen.emplace(bp.coords, bp);
  std::vector<BoxPoint> out;
  for (auto& [_, bp] : seen) out.push_back(bp);
  return out;
}

std::size_t top_cones_containing(const stacktor::Fan& fan, const stacktor::Cone& c) {
  if (fan.ambient_rank() == 0) return 1;
  std::size_t n = 0;
  for (const auto& m : fan.max_cones()) {
    if (m.size() != fan.ambient_rank()) continue;
    if (std::includes(m.begin(), m.end(), c.begin(), c.end())) ++n;
  }
  return n;
}

std::size_t sector_dimension_sum(const stacktor::StackyFan& sf) {
  std::size_t total = 0;
  for (const auto& bp : box_total_brute_force(sf)) total += top_cones_containing(sf.fan(), bp.support);
  return total;
}

namespace {

bool zero_in(const stacktor::FgAbelianGroup& g, const Column& c) {
  for (std::size_t i = 0; i < g.free_rank(); ++i)
    if (c[i] != 0) return false;
  for (std::size_t j = 0; j < g.torsion().size(); ++j)
    if (c[g.free_rank() + j] % g.torsion()[j] != 0) return false;
  return true;
}

Column times(const stacktor::IntMatrix& m, const Column& x) {
  Column y(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
  return y;
}

Integer order_of(const Invariants& inv) {
  Integer n = 1;
  for (const auto& q : inv.torsion) n *= q;
  return n;
}

}  // namespace

std::vector<std::string> gale_exactness(const stacktor::GroupHom& beta, const stacktor::GaleDual& gd) {
  std::vector<std::string> failures;
  const auto& n = beta.codomain();
  const auto& b = beta.matrix();
  const std::size_t m = b.cols();
  const std::size_t rows = n.generators();
  const std::size_t s = n.torsion().size();
  const std::size_t d = n.free_rank();

  // A = [B | Q]; the columns of its transpose are its rows.
  std::vector<Column> a_cols(rows, Column(m + s, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < m; ++j) a_cols[i][j] = b(i, j);
    if (i >= d) a_cols[i][m + (i - d)] = n.torsion()[i - d];
  }
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < m + s; ++j)
      if (gd.mapping_cone(i, j) != a_cols[i][j]) {
        failures.push_back("mapping cone differs from [B | Q]");
        i = rows;
        break;
      }

  for (const auto& col : a_cols)
    if (!zero_in(gd.dg, times(gd.to_dg, col))) {
      failures.push_back("to_dg does not kill the relations");
      break;
    }
  for (std::size_t g = 0; g < gd.dg.generators(); ++g) {
    Column e(gd.dg.generators(), 0);
    e[g] = 1;
    Column back = times(gd.to_dg, times(gd.section, e));
    for (std::size_t i = 0; i < back.size(); ++i) back[i] -= e[i];
    if (!zero_in(gd.dg, back)) {
      failures.push_back("section is not a right inverse");
      break;
    }
  }
  const Invariants dg_inv = cokernel_invariants(a_cols, m + s);
  if (!(dg_inv == invariants_of(gd.dg))) failures.push_back("DG invariants differ from coker A^T");

  // Cokernel of beta^vee: generators of DG modulo the image and the torsion relations.
  std::vector<Column> image;
  const auto& bv = gd.beta_vee.matrix();
  for (std::size_t j = 0; j < m; ++j) image.push_back(bv.column(j));
  for (std::size_t t = 0; t < gd.dg.torsion().size(); ++t) {
    Column r(gd.dg.generators(), 0);
    r[gd.dg.free_rank() + t] = gd.dg.torsion()[t];
    image.push_back(r);
  }
  const Invariants coker = cokernel_invariants(image, gd.dg.generators());
  if (coker.free_rank != 0 || order_of(coker) != n.torsion_order())
    failures.push_back("coker beta^vee is not the torsion of N");

  // Exactness at Z^m: beta^vee kills the rows of B-bar and no other class of
  // their saturation.
  std::vector<Column> bbar_t;
  for (std::size_t i = 0; i < d; ++i) {
    Column r(m);
    for (std::size_t j = 0; j < m; ++j) r[j] = b(i, j);
    bbar_t.push_back(r);
    if (!zero_in(gd.dg, times(bv, r))) {
      failures.push_back("beta^vee does not kill B-bar^T");
      break;
    }
  }
  if (rank(bbar_t, m) != d || dg_inv.free_rank + d != m) {
    failures.push_back("ranks do not add up along the sequence");
  } else {
    for (const auto& lp : parallelepiped_points(bbar_t, m)) {
      bool origin = true;
      for (const auto& x : lp.t) origin = origin && x == 0;
      if (!origin && zero_in(gd.dg, times(bv, lp.point))) {
        failures.push_back("sequence is not exact at Z^m");
        break;
      }
    }
  }
  return failures;
}

}  // namespace oracle

#include "stacktor/presentations.hpp"

#include "stacktor/errors.hpp"
#include "stacktor/linalg.hpp"

#include <algorithm>
#include <limits>

namespace stacktor {

namespace {

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

// prod_i x_i^{e_i} over unit variables, negative exponents through the inverses.
Poly laurent_monomial(const VarTable& vars, const std::vector<std::size_t>& index, const IntVector& exps,
                      MonomialOrder order) {
  Poly p = one(vars, order);
  for (std::size_t k = 0; k < index.size(); ++k)
    if (exps[k] != 0) p = p * unit_power(vars, index[k], exps[k], order);
  return p;
}

// Power of a base unit with its inverse: u^k for k >= 0, u_dual^{-k} otherwise.
Poly signed_power(const Poly& u, const Poly& u_dual, const Integer& k) {
  if (k >= 0) return u.pow(static_cast<unsigned>(k));
  return u_dual.pow(static_cast<unsigned>(-k));
}

// theta-values <theta, v_k> for a rational theta, as rationals.
RatVector pair_with_basis(const RatVector& theta, const std::vector<IntVector>& basis) {
  RatVector out;
  for (const auto& v : basis) {
    Rational s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += theta[i] * Rational(v[i]);
    out.push_back(s);
  }
  return out;
}

// c1(xi_theta) = sum_k <theta, v_k> c1(xi_k), lifted into a ring with `nvars` variables.
Poly c1_of(const RatVector& theta, const std::vector<IntVector>& basis, const TwistSpec& twist, std::size_t nvars,
           MonomialOrder order) {
  Poly out(nvars, order);
  const auto coeffs = pair_with_basis(theta, basis);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0) out += lift_base(twist.c1[k], nvars).scaled(Scalar(coeffs[k]));
  return out;
}

// xi^vee_theta = prod_k (xi_k^vee)^{<theta, v_k>} for an integral theta, in base K.
Poly xi_dual_of(const IntVector& theta, const std::vector<IntVector>& basis, const TwistSpec& twist) {
  Poly out = one(twist.base.k.vars, twist.base.k.order);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Integer s = 0;
    for (std::size_t i = 0; i < theta.size(); ++i) s += theta[i] * basis[k][i];
    if (s != 0) out = out * signed_power(twist.xi_dual[k], twist.xi[k], s);
  }
  return twist.base.k.finalized ? twist.base.k.reduce(out) : out;
}

IntVector row_of(const IntMatrix& m, std::size_t i) { return m.row(i); }

// Inverse of a unimodular integer matrix given by columns.
std::optional<IntMatrix> unimodular_inverse(const std::vector<IntVector>& columns, std::size_t d) {
  const IntMatrix m = IntMatrix::from_columns(d, columns);
  const Integer det = m.determinant();
  if (det != 1 && det != -1) return std::nullopt;
  IntMatrix inv(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    IntVector e(d, Integer(0));
    e[k] = 1;
    const auto x = solve_integer(m, e);
    for (std::size_t i = 0; i < d; ++i) inv(i, k) = (*x)[i];
  }
  return inv;
}

}  // namespace

std::size_t RingPresentation::dimension() const {
  if (!finalized) throw Error(ErrorCode::InvalidArgument, "ring presentation has not been finalized");
  if (!qb.finite) throw Error(ErrorCode::InvalidArgument, "ring quotient is infinite dimensional");
  return qb.dimension();
}

std::vector<Poly> unit_relations(const VarTable& vars, MonomialOrder order) {
  std::vector<Poly> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto inv = vars[i].inverse;
    if (inv && *inv > i) {
      out.push_back(Poly::variable(vars.size(), i, order) * Poly::variable(vars.size(), *inv, order) -
                    one(vars, order));
    }
  }
  return out;
}

void finalize(RingPresentation& ring, const GroebnerOptions& options) {
  ring.gb = groebner(ring.relations, ring.vars.size(), ring.order, options);
  ring.qb = quotient_basis(ring.gb);
  ring.finalized = true;
}

Poly lift_base(const Poly& p, std::size_t nvars) { return p.remapped(nvars, iota(p.nvars())); }

BaseRing point_base() {
  BaseRing b;
  b.name = "point";
  finalize(b.k);
  finalize(b.h);
  b.chern_classes = std::vector<Poly>{};
  return b;
}

BaseRing projective_base(unsigned r) {
  BaseRing b;
  b.name = "P" + std::to_string(r);
  b.k.vars.add_unit("h");
  b.k.base_vars = 2;
  b.k.relations = unit_relations(b.k.vars);
  b.k.relations.push_back((b.k.variable("h") - b.k.one()).pow(r + 1));
  b.h.vars.add("H", Rational(2));
  b.h.base_vars = 1;
  b.h.relations.push_back(b.h.variable("H").pow(r + 1));
  finalize(b.k);
  finalize(b.h);
  b.k_augmentation = {b.k.variable("h") - b.k.one(), b.k.variable("h_inv") - b.k.one()};
  b.h_augmentation = {b.h.variable("H")};
  b.chern_classes = std::vector<Poly>{b.h.variable("H"), -b.h.variable("H")};
  return b;
}

bool TwistSpec::is_trivial() const {
  for (const auto& x : xi) {
    const Poly r = base.k.finalized ? base.k.reduce(x - base.k.one()) : x - base.k.one();
    if (!r.is_zero()) return false;
  }
  for (const auto& c : c1) {
    const Poly r = base.h.finalized ? base.h.reduce(c) : c;
    if (!r.is_zero()) return false;
  }
  return true;
}

void TwistSpec::validate(std::size_t d) const {
  if (xi.size() != d || xi_dual.size() != d || c1.size() != d) {
    throw Error(ErrorCode::InvalidArgument, "twist: expected " + std::to_string(d) + " line bundles, got " +
                                                std::to_string(xi.size()));
  }
  if (!base.k.finalized || !base.h.finalized) throw Error(ErrorCode::InvalidArgument, "twist: base not finalized");
  for (std::size_t k = 0; k < d; ++k) {
    if (!base.k.reduce(xi[k] * xi_dual[k] - base.k.one()).is_zero()) {
      throw Error(ErrorCode::InvalidArgument, "twist: xi_" + std::to_string(k + 1) + " times its dual is not 1");
    }
    const unsigned n = static_cast<unsigned>(base.h.dimension()) + 1;
    if (!base.h.reduce(c1[k].pow(n)).is_zero()) {
      throw Error(ErrorCode::InvalidArgument, "twist: c1(xi_" + std::to_string(k + 1) + ") is not nilpotent");
    }
  }
}

TwistSpec trivial_twist(const BaseRing& base, std::size_t d) {
  TwistSpec t;
  t.base = base;
  for (std::size_t k = 0; k < d; ++k) {
    t.xi.push_back(base.k.one());
    t.xi_dual.push_back(base.k.one());
    t.c1.push_back(base.h.zero());
  }
  return t;
}

TwistSpec projective_twist(unsigned r, const std::vector<long>& degrees) {
  TwistSpec t;
  t.base = projective_base(r);
  const std::size_t h = t.base.k.vars.require("h");
  for (long a : degrees) {
    t.xi.push_back(unit_power(t.base.k.vars, h, Integer(a)));
    t.xi_dual.push_back(unit_power(t.base.k.vars, h, Integer(-a)));
    t.c1.push_back(t.base.h.variable("H").scaled(Scalar(Integer(a))));
  }
  return t;
}

Poly invert_in_quotient(const RingPresentation& ring, const Poly& p) {
  const auto& basis = ring.qb.monomials;
  if (!ring.finalized || !ring.qb.finite) throw Error(ErrorCode::InvalidArgument, "invert: ring must be finite");
  FieldMatrix<Scalar> a(basis.size(), std::vector<Scalar>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto col = coordinates(p * Poly::term(basis[j], Scalar(1), ring.order), ring.gb, ring.qb);
    for (std::size_t i = 0; i < basis.size(); ++i) a[i][j] = col[i];
  }
  const auto target = coordinates(ring.one(), ring.gb, ring.qb);
  const auto y = solve(a, target, basis.size());
  if (!y) throw Error(ErrorCode::InvalidArgument, "invert: element is not a unit");
  Poly out = ring.zero();
  for (std::size_t j = 0; j < basis.size(); ++j) out.add_term(basis[j], (*y)[j]);
  return out;
}

std::vector<IntVector> twist_basis(const StackyFan& sf, const TwistSpec& twist) {
  const std::size_t d = sf.rank();
  if (twist.is_trivial()) {
    std::vector<IntVector> e;
    for (std::size_t k = 0; k < d; ++k) {
      IntVector v(d, Integer(0));
      v[k] = 1;
      e.push_back(v);
    }
    return e;
  }
  for (const auto& tau : sf.fan().top_cones()) {
    std::vector<IntVector> cols;
    for (auto i : tau) cols.push_back(sf.fan().ray(i));
    if (unimodular_inverse(cols, d)) return cols;
  }
  throw Error(ErrorCode::NoUnimodularTopCone, "twist: no top cone whose rays form a basis of N-bar");
}

CharacterRing character_ring(const StackyFan& sf) {
  CharacterRing out;
  const auto bm = sf.beta_min();
  out.dual = gale_dual(bm);
  const std::size_t n = sf.ray_count();
  for (std::size_t i = 0; i < n; ++i) out.x_exponents.push_back(out.dual.beta_vee.matrix().column(i));

  auto& r = out.ring;
  if (sf.lattice().is_torsion_free()) {
    out.laurent_in_x = true;
    std::vector<std::size_t> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(r.vars.add_unit("x" + std::to_string(i + 1)));
    r.relations = unit_relations(r.vars);
    for (std::size_t k = 0; k < sf.rank(); ++k) {
      IntVector e;
      for (std::size_t j = 0; j < n; ++j) e.push_back(sf.bbar(j)[k]);
      r.relations.push_back(laurent_monomial(r.vars, xs, e, r.order) - r.one());
    }
    for (auto i : xs) out.x.push_back(Poly::variable(r.vars.size(), i, r.order));
  } else {
    const auto& dg = out.dual.dg;
    std::vector<std::size_t> gens;
    for (std::size_t k = 0; k < dg.free_rank(); ++k) gens.push_back(r.vars.add_unit("u" + std::to_string(k + 1)));
    const std::string tname = n == 0 ? "t" : "w";
    for (std::size_t j = 0; j < dg.torsion().size(); ++j)
      gens.push_back(r.vars.add(tname + std::to_string(j + 1)));
    r.relations = unit_relations(r.vars);
    for (std::size_t j = 0; j < dg.torsion().size(); ++j) {
      r.relations.push_back(Poly::variable(r.vars.size(), gens[dg.free_rank() + j], r.order)
                                .pow(static_cast<unsigned>(to_i64(dg.torsion()[j]))) -
                            r.one());
    }
    for (std::size_t i = 0; i < n; ++i) out.x.push_back(laurent_monomial(r.vars, gens, out.x_exponents[i], r.order));
  }
  finalize(r);
  return out;
}

namespace {

std::vector<Poly> lifted_relations(const RingPresentation& base, std::size_t nvars) {
  std::vector<Poly> out;
  for (const auto& p : base.relations) out.push_back(lift_base(p, nvars));
  return out;
}

std::vector<Poly> unit_relations_from(const VarTable& vars, std::size_t start, MonomialOrder order) {
  std::vector<Poly> out;
  for (auto& p : unit_relations(vars, order)) {
    bool touches_new = false;
    for (const auto& kv : p.terms())
      for (std::size_t i = start; i < kv.first.size(); ++i)
        if (kv.first[i]) touches_new = true;
    if (touches_new) out.push_back(std::move(p));
  }
  return out;
}

struct GroupRingVars {
  FgAbelianGroup group;
  std::vector<std::size_t> gens;
};

GroupRingVars add_group_ring(VarTable& vars, const FgAbelianGroup& g, const std::string& free_name,
                             const std::string& torsion_name) {
  GroupRingVars out{g, {}};
  for (std::size_t k = 0; k < g.free_rank(); ++k) out.gens.push_back(vars.add_unit(free_name + std::to_string(k + 1)));
  for (std::size_t j = 0; j < g.torsion().size(); ++j)
    out.gens.push_back(vars.add(torsion_name + std::to_string(j + 1)));
  return out;
}

std::vector<Poly> torsion_relations(const VarTable& vars, const GroupRingVars& gr, MonomialOrder order) {
  std::vector<Poly> out;
  const std::size_t f = gr.group.free_rank();
  for (std::size_t j = 0; j < gr.group.torsion().size(); ++j) {
    out.push_back(Poly::variable(vars.size(), gr.gens[f + j], order)
                      .pow(static_cast<unsigned>(to_i64(gr.group.torsion()[j]))) -
                  one(vars, order));
  }
  return out;
}

Poly group_monomial(const VarTable& vars, const GroupRingVars& gr, const IntVector& coords, MonomialOrder order) {
  return laurent_monomial(vars, gr.gens, gr.group.reduce(coords), order);
}

// Constants c_j with prod_j c_j^{<theta, b_j>} = xi^vee_theta, supported on a
// top cone whose b-bar form a basis; all ones for a trivial twist.
struct TwistConstants {
  std::vector<Poly> c;
  std::vector<Poly> c_inv;
};

TwistConstants twist_constants(const StackyFan& sf, const TwistSpec& twist, const std::vector<IntVector>& basis) {
  TwistConstants out;
  const std::size_t n = sf.ray_count();
  out.c.assign(n, twist.base.k.one());
  out.c_inv.assign(n, twist.base.k.one());
  if (twist.is_trivial()) return out;
  const std::size_t d = sf.rank();
  for (const auto& tau : sf.fan().top_cones()) {
    std::vector<IntVector> cols;
    for (auto i : tau) cols.push_back(sf.bbar(i));
    const auto inv = unimodular_inverse(cols, d);
    if (!inv) continue;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      IntVector theta = row_of(*inv, k);
      out.c[tau[k]] = xi_dual_of(theta, basis, twist);
      for (auto& x : theta) x = -x;
      out.c_inv[tau[k]] = xi_dual_of(theta, basis, twist);
    }
    return out;
  }
  throw Error(ErrorCode::NoUnimodularTopCone, "twist: no top cone whose b-bar vectors form a basis of N-bar");
}

void add_stanley_reisner(RingPresentation& r, const Fan& fan, const std::vector<Poly>& x) {
  for (const auto& face : primitive_nonfaces(fan)) {
    Poly p = r.one();
    for (auto i : face) p = p * (r.one() - x[i]);
    r.relations.push_back(p);
  }
}

}  // namespace

KRing k_ring(const StackyFan& sf, const TwistSpec& twist, const GroebnerOptions& options) {
  require_valid(sf);
  twist.validate(sf.rank());
  const auto basis = twist_basis(sf, twist);
  const std::size_t n = sf.ray_count();
  KRing out;
  auto& r = out.ring;
  r.vars = twist.base.k.vars;
  r.base_vars = r.vars.size();

  if (sf.lattice().is_torsion_free()) {
    out.laurent_in_x = true;
    std::vector<std::size_t> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(r.vars.add_unit("x" + std::to_string(i + 1)));
    r.relations = lifted_relations(twist.base.k, r.vars.size());
    for (auto& p : unit_relations_from(r.vars, r.base_vars, r.order)) r.relations.push_back(std::move(p));
    const auto vinv = unimodular_inverse(basis, sf.rank());
    for (std::size_t k = 0; k < sf.rank(); ++k) {
      const IntVector u = vinv->row(k);
      IntVector e;
      for (std::size_t j = 0; j < n; ++j) {
        Integer s = 0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * sf.bbar(j)[i];
        e.push_back(s);
      }
      r.relations.push_back(laurent_monomial(r.vars, xs, e, r.order) -
                            lift_base(twist.base.k.reduce(twist.xi_dual[k]), r.vars.size()));
    }
    for (auto i : xs) out.x.push_back(Poly::variable(r.vars.size(), i, r.order));
  } else {
    const auto gd = gale_dual(sf.beta_min());
    const auto gr = add_group_ring(r.vars, gd.dg, "u", n == 0 ? "t" : "w");
    r.relations = lifted_relations(twist.base.k, r.vars.size());
    for (auto& p : unit_relations_from(r.vars, r.base_vars, r.order)) r.relations.push_back(std::move(p));
    for (auto& p : torsion_relations(r.vars, gr, r.order)) r.relations.push_back(std::move(p));
    const auto tc = twist_constants(sf, twist, basis);
    for (std::size_t i = 0; i < n; ++i) {
      out.x.push_back(lift_base(tc.c[i], r.vars.size()) *
                      group_monomial(r.vars, gr, gd.beta_vee.matrix().column(i), r.order));
    }
  }
  add_stanley_reisner(r, sf.fan(), out.x);
  finalize(r, options);
  return out;
}

FullKRing k_ring_full(const StackyFan& sf, const TwistSpec& twist, const KRing& minimal_ring,
                      const GroebnerOptions& options) {
  require_valid(sf);
  twist.validate(sf.rank());
  const auto basis = twist_basis(sf, twist);
  const std::size_t n = sf.ray_count();
  const std::size_t m = sf.size();
  const std::size_t s = sf.lattice().torsion().size();

  FullKRing out;
  auto& r = out.full.ring;
  r.vars = twist.base.k.vars;
  r.base_vars = r.vars.size();
  const auto gd = gale_dual(sf.beta());
  const auto gr = add_group_ring(r.vars, gd.dg, "U", "W");
  r.relations = lifted_relations(twist.base.k, r.vars.size());
  for (auto& p : unit_relations_from(r.vars, r.base_vars, r.order)) r.relations.push_back(std::move(p));
  for (auto& p : torsion_relations(r.vars, gr, r.order)) r.relations.push_back(std::move(p));
  const auto tc = twist_constants(sf, twist, basis);
  std::vector<Poly> x;
  for (std::size_t j = 0; j < m; ++j) {
    Poly g = group_monomial(r.vars, gr, gd.beta_vee.matrix().column(j), r.order);
    x.push_back(j < n ? lift_base(tc.c[j], r.vars.size()) * g : g);
  }
  add_stanley_reisner(r, sf.fan(), x);
  for (std::size_t j = n; j < m; ++j) r.relations.push_back(r.one() - x[j]);
  out.full.x.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  finalize(r, options);

  // Images in the minimal ring. A generator with lift z in Z^{m+s} goes to the
  // class of z with the extra coordinates dropped.
  const auto& target = minimal_ring.ring;
  const std::size_t tn = target.vars.size();
  for (std::size_t i = 0; i < r.base_vars; ++i) out.to_minimal.push_back(Poly::variable(tn, i, target.order));

  std::optional<GaleDual> gd_min;
  std::optional<GroupRingVars> gr_min;
  if (!minimal_ring.laurent_in_x) {
    gd_min = gale_dual(sf.beta_min());
    gr_min = GroupRingVars{gd_min->dg, {}};
    for (std::size_t k = 0; k < gd_min->dg.free_rank(); ++k)
      gr_min->gens.push_back(target.vars.require("u" + std::to_string(k + 1)));
    for (std::size_t j = 0; j < gd_min->dg.torsion().size(); ++j)
      gr_min->gens.push_back(target.vars.require((n == 0 ? "t" : "w") + std::to_string(j + 1)));
  }
  auto image_of = [&](const IntVector& z) {
    IntVector zmin;
    for (std::size_t j = 0; j < n; ++j) zmin.push_back(z[j]);
    for (std::size_t j = 0; j < s; ++j) zmin.push_back(z[m + j]);
    if (gr_min) return group_monomial(target.vars, *gr_min, gd_min->to_dg.apply(zmin), target.order);
    // Laurent form: the class of e_j is x_j / c_j.
    Poly p = target.one();
    for (std::size_t j = 0; j < n; ++j) {
      if (zmin[j] == 0) continue;
      const std::size_t xj = target.vars.require("x" + std::to_string(j + 1));
      p = p * unit_power(target.vars, xj, zmin[j], target.order);
      const Poly& cinv = zmin[j] > 0 ? tc.c_inv[j] : tc.c[j];
      const Integer e = zmin[j] > 0 ? zmin[j] : Integer(-zmin[j]);
      p = p * lift_base(cinv, tn).pow(static_cast<unsigned>(to_i64(e)));
    }
    return p;
  };
  for (std::size_t k = 0; k < gr.gens.size(); ++k) {
    const IntVector z = gd.section.column(k);
    out.to_minimal.push_back(image_of(z));
    if (k < gd.dg.free_rank()) {
      IntVector neg = z;
      for (auto& v : neg) v = -v;
      out.to_minimal.push_back(image_of(neg));
    }
  }
  return out;
}

SectorRing sector_ring(const StackyFan& sf, const TwistSpec& twist, const BoxElement& v,
                       const GroebnerOptions& options) {
  const auto basis = twist_basis(sf, twist);
  const auto q = quotient(sf, v.sigma);
  const std::size_t n = sf.ray_count();
  const std::size_t d = sf.rank();

  SectorRing out;
  out.v = v;
  out.shift = Rational(2) * v.age();
  auto& r = out.ring;
  r.vars = twist.base.h.vars;
  r.base_vars = r.vars.size();
  std::vector<std::size_t> yv;
  for (std::size_t k = 0; k < q.link_ray_count; ++k) {
    const std::size_t j = q.parent_columns[k];
    out.link_rays.push_back(j);
    yv.push_back(r.vars.add("Y" + std::to_string(j + 1), Rational(2)));
  }
  const std::size_t nv = r.vars.size();
  auto y = [&](std::size_t k) { return Poly::variable(nv, yv[k], r.order); };
  r.relations = lifted_relations(twist.base.h, nv);
  for (const auto& face : primitive_nonfaces(q.sf.fan())) {
    Poly p = r.one();
    for (auto k : face) p = p * y(k);
    r.relations.push_back(p);
  }
  // Linear relations for theta in M vanishing on sigma(v).
  std::vector<std::size_t> free_rows, free_cols;
  for (std::size_t i = 0; i < q.sf.rank(); ++i) free_rows.push_back(i);
  for (std::size_t j = 0; j < d; ++j) free_cols.push_back(j);
  const IntMatrix p = q.projection.matrix().select_rows(free_rows).select_columns(free_cols);
  auto linear = [&](const RatVector& theta) {
    Poly lin = c1_of(theta, basis, twist, nv, r.order);
    for (std::size_t k = 0; k < yv.size(); ++k) {
      Rational s = 0;
      const IntVector bj = sf.bbar(out.link_rays[k]);
      for (std::size_t i = 0; i < d; ++i) s += theta[i] * Rational(bj[i]);
      if (s != 0) lin += y(k).scaled(Scalar(s));
    }
    return lin;
  };
  for (std::size_t row = 0; row < p.rows(); ++row) {
    RatVector theta;
    for (std::size_t i = 0; i < d; ++i) theta.emplace_back(p(row, i));
    r.relations.push_back(linear(theta));
  }

  out.restriction.assign(n, r.zero());
  for (std::size_t k = 0; k < yv.size(); ++k) out.restriction[out.link_rays[k]] = y(k);
  // Y_i for i in sigma(v): pair the linear relation with theta dual to b-bar on sigma.
  FieldMatrix<Rational> bt(v.sigma.size(), std::vector<Rational>(d));
  for (std::size_t a = 0; a < v.sigma.size(); ++a) {
    const IntVector bi = sf.bbar(v.sigma[a]);
    for (std::size_t i = 0; i < d; ++i) bt[a][i] = Rational(bi[i]);
  }
  for (std::size_t a = 0; a < v.sigma.size(); ++a) {
    RatVector e(v.sigma.size(), Rational(0));
    e[a] = 1;
    const auto theta = solve(bt, e, d);
    if (!theta) throw Error(ErrorCode::InvalidArgument, "sector: cone vectors are dependent");
    out.restriction[v.sigma[a]] = -linear(*theta);
  }
  finalize(r, options);
  return out;
}

CRRing cr_ring(const StackyFan& sf, const TwistSpec& twist, const GroebnerOptions& options) {
  require_valid(sf);
  twist.validate(sf.rank());
  const auto basis = twist_basis(sf, twist);
  const std::size_t n = sf.ray_count();
  const std::size_t d = sf.rank();

  CRRing out;
  out.box = box_total(sf);
  auto& r = out.global;
  r.vars = twist.base.h.vars;
  r.base_vars = r.vars.size();
  for (std::size_t i = 0; i < n; ++i) out.y_var.push_back(r.vars.add("Y" + std::to_string(i + 1), Rational(2)));
  std::size_t t = 0;
  for (const auto& v : out.box) {
    if (v.is_zero()) {
      out.t_var.push_back(std::nullopt);
    } else {
      out.t_var.push_back(r.vars.add("T" + std::to_string(++t), Rational(2) * v.age()));
    }
  }
  const std::size_t nv = r.vars.size();
  auto y = [&](std::size_t i) { return Poly::variable(nv, out.y_var[i], r.order); };
  auto tv = [&](std::size_t k) {
    return out.t_var[k] ? Poly::variable(nv, *out.t_var[k], r.order) : r.one();
  };
  r.relations = lifted_relations(twist.base.h, nv);
  const auto nonfaces = primitive_nonfaces(sf.fan());
  for (const auto& face : nonfaces) {
    Poly p = r.one();
    for (auto i : face) p = p * y(i);
    r.relations.push_back(p);
  }
  for (std::size_t k = 0; k < d; ++k) {
    RatVector theta(d, Rational(0));
    theta[k] = 1;
    Poly lin = c1_of(theta, basis, twist, nv, r.order);
    for (std::size_t i = 0; i < n; ++i)
      if (sf.bbar(i)[k] != 0) lin += y(i).scaled(Scalar(sf.bbar(i)[k]));
    r.relations.push_back(lin);
  }
  auto box_index = [&](const GroupElement& g) {
    for (std::size_t k = 0; k < out.box.size(); ++k)
      if (out.box[k].v == g) return k;
    throw Error(ErrorCode::InvalidArgument, "cr_ring: element missing from Box");
  };
  for (std::size_t k = 0; k < out.box.size(); ++k) {
    if (!out.t_var[k]) continue;
    for (std::size_t l = k; l < out.box.size(); ++l) {
      if (!out.t_var[l]) continue;
      const Poly lhs = tv(k) * tv(l);
      if (!sf.fan().is_cone(cone_union(out.box[k].sigma, out.box[l].sigma))) {
        r.relations.push_back(lhs);
        continue;
      }
      const auto dec = decompose(sf, out.box[k].v + out.box[l].v);
      Poly rhs = tv(box_index(dec.box.v));
      for (std::size_t i = 0; i < n; ++i)
        if (dec.multiplicities[i] != 0) rhs = rhs * y(i).pow(static_cast<unsigned>(to_i64(dec.multiplicities[i])));
      r.relations.push_back(lhs - rhs);
    }
    std::vector<Cone> seen;
    for (const auto& face : nonfaces) {
      Cone rest;
      std::set_difference(face.begin(), face.end(), out.box[k].sigma.begin(), out.box[k].sigma.end(),
                          std::back_inserter(rest));
      if (std::find(seen.begin(), seen.end(), rest) != seen.end()) continue;
      seen.push_back(rest);
      Poly p = tv(k);
      for (auto i : rest) p = p * y(i);
      r.relations.push_back(p);
    }
  }
  finalize(r, options);

  for (const auto& v : out.box) {
    out.sectors.sectors.push_back(sector_ring(sf, twist, v, options));
    out.sectors.total_dimension += out.sectors.sectors.back().ring.dimension();
  }
  return out;
}

std::optional<std::size_t> free_rank_over_base(const RingPresentation& ring, const RingPresentation& base,
                                               const std::vector<Poly>& augmentation,
                                               const GroebnerOptions& options) {
  const std::size_t total = ring.dimension();
  const std::size_t b = base.dimension();
  if (b == 0 || total % b != 0) return std::nullopt;
  RingPresentation fibre = ring;
  for (const auto& a : augmentation) fibre.relations.push_back(lift_base(a, ring.vars.size()));
  finalize(fibre, options);
  if (fibre.dimension() != total / b) return std::nullopt;
  return total / b;
}

GerbePresentations gerbe_presentations(const FgAbelianGroup& n, const BaseRing& base,
                                       const std::optional<Poly>& line_bundle, const GroebnerOptions& options) {
  if (!n.is_finite()) throw Error(ErrorCode::InvalidArgument, "gerbe: N must be finite");
  if (line_bundle) invert_in_quotient(base.k, *line_bundle);
  GerbePresentations out;
  out.sf = StackyFan(n, Fan(0, {}, {}), {GroupElement(n, IntVector(n.generators(), Integer(1)))});
  out.k = k_ring(out.sf, trivial_twist(base, 0), options).ring;
  out.alpha = gale_dual(out.sf.beta()).beta_vee.matrix();

  auto build = [&](const RingPresentation& b, bool literal) {
    RingPresentation r;
    r.vars = b.vars;
    r.base_vars = r.vars.size();
    std::vector<std::size_t> ts;
    for (std::size_t j = 0; j < n.torsion().size(); ++j) ts.push_back(r.vars.add("t" + std::to_string(j + 1)));
    r.relations = lifted_relations(b, r.vars.size());
    for (std::size_t j = 0; j < ts.size(); ++j) {
      Poly p = Poly::variable(r.vars.size(), ts[j], r.order).pow(static_cast<unsigned>(to_i64(n.torsion()[j])));
      r.relations.push_back(literal ? p : p - r.one());
    }
    finalize(r, options);
    return r;
  };
  out.cr = build(base.h, false);
  out.k_literal = build(base.k, true);
  return out;
}

std::vector<Poly> gerbe_cr_images(const CRRing& cr, const GerbePresentations& gerbe) {
  const auto& target = gerbe.cr;
  if (gerbe.sf.ray_count() != 0 || cr.global.base_vars != target.base_vars)
    throw Error(ErrorCode::InvalidArgument, "gerbe map: rings do not match");
  const std::size_t nt = target.nvars();
  std::vector<Poly> out(cr.global.nvars(), target.zero());
  for (std::size_t i = 0; i < target.base_vars; ++i) out[i] = Poly::variable(nt, i, target.order);
  for (std::size_t k = 0; k < cr.box.size(); ++k) {
    if (!cr.t_var[k]) continue;
    const IntVector& v = cr.box[k].v.coords();
    Poly p = target.one();
    for (std::size_t j = 0; j < v.size(); ++j)
      p = p * Poly::variable(nt, target.base_vars + j, target.order).pow(static_cast<unsigned>(to_i64(v[j])));
    out[*cr.t_var[k]] = p;
  }
  return out;
}

}  // namespace stacktor

#include "stacktor/stringy.hpp"

#include "stacktor/errors.hpp"

#include <algorithm>
#include <set>

namespace stacktor {

namespace {

Scalar root_of_unity(const Rational& q) {
  const Rational f = frac(q);
  const Integer den = denominator_of(f);
  return Scalar::zeta(static_cast<unsigned>(to_i64(den)), static_cast<long>(to_i64(numerator_of(f))));
}

std::size_t box_index(const CRRing& cr, const GroupElement& g) {
  for (std::size_t k = 0; k < cr.box.size(); ++k)
    if (cr.box[k].v == g) return k;
  throw Error(ErrorCode::InvalidArgument, "element missing from Box: " + g.to_string());
}

Poly base_monomial(const Monomial& m, std::size_t nb, const RingPresentation& target) {
  Monomial out(target.nvars(), 0);
  for (std::size_t i = 0; i < nb; ++i) out[i] = m[i];
  return Poly::term(out, Scalar(1), target.order);
}

// p(images) in a ring with `nvars` variables; also for a ring without variables.
Poly substitute_into(const Poly& p, const std::vector<Poly>& images, std::size_t nvars, MonomialOrder order) {
  if (images.empty()) return Poly::constant(nvars, p.coefficient(Monomial{}), order);
  return p.substitute(images);
}

bool contains(const Cone& c, std::size_t i) { return std::binary_search(c.begin(), c.end(), i); }

struct Triple {
  std::size_t v1, v2, v3, w;
  TripleCoefficients t;
};

std::vector<Triple> valid_triples(const StackyFan& sf, const CRRing& cr, std::size_t v1, std::size_t v2) {
  std::vector<Triple> out;
  for (std::size_t v3 = 0; v3 < cr.box.size(); ++v3) {
    auto t = triple_coefficients(sf, cr.box[v1], cr.box[v2], cr.box[v3]);
    if (!t.valid()) continue;
    const std::size_t w = box_index(cr, box_inverse(sf, cr.box[v3]).v);
    out.push_back(Triple{v1, v2, v3, w, std::move(t)});
  }
  return out;
}

// sigma(v1, v2, v3) minus sigma(w).
Cone normal_rays(const Triple& tr, const CRRing& cr) {
  Cone out;
  for (auto i : tr.t.sigma)
    if (!contains(cr.box[tr.w].sigma, i)) out.push_back(i);
  return out;
}

std::string describe(const CRRing& cr, std::size_t s, const Monomial& m) {
  const auto& r = cr.sectors.sectors[s].ring;
  return "sector " + std::to_string(s) + " [" + to_string(Poly::term(m, Scalar(1), r.order), r.vars) + "]";
}

}  // namespace

Cone obstruction_support(const TripleCoefficients& t) {
  Cone out;
  for (std::size_t i = 0; i < t.a.size(); ++i)
    if (t.a[i] == 2) out.push_back(i);
  return out;
}

SectorVector zero_vector(const CRRing& cr) {
  SectorVector out;
  for (const auto& s : cr.sectors.sectors) out.parts.push_back(s.ring.zero());
  return out;
}

SectorVector basis_vector(const CRRing& cr, std::size_t sector, const Monomial& m) {
  SectorVector out = zero_vector(cr);
  out.parts.at(sector) = Poly::term(m, Scalar(1), cr.sectors.sectors[sector].ring.order);
  return out;
}

bool operator==(const SectorVector& a, const SectorVector& b) { return a.parts == b.parts; }

std::string to_string(const SectorVector& a, const CRRing& cr) {
  std::string out;
  for (std::size_t s = 0; s < a.parts.size(); ++s) {
    if (a.parts[s].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "[" + cr.box[s].v.to_string() + "](" + to_string(a.parts[s], cr.sectors.sectors[s].ring.vars) + ")";
  }
  return out.empty() ? "0" : out;
}

Poly transport(const Poly& p, const SectorRing& from, const SectorRing& to) {
  const std::size_t nb = from.ring.base_vars;
  std::vector<Poly> images;
  for (std::size_t i = 0; i < nb; ++i) images.push_back(Poly::variable(to.ring.nvars(), i, to.ring.order));
  for (auto j : from.link_rays) images.push_back(to.restriction[j]);
  return to.ring.reduce(substitute_into(p, images, to.ring.nvars(), to.ring.order));
}

ObstructionClass obstruction_euler_class(const StackyFan& sf, const CRRing& cr, std::size_t v1, std::size_t v2,
                                         std::size_t v3) {
  const auto t = triple_coefficients(sf, cr.box.at(v1), cr.box.at(v2), cr.box.at(v3));
  if (!t.valid()) throw Error(ErrorCode::NoCommonCone, "obstruction class: the triple is not valid");
  ObstructionClass out;
  out.sector = box_index(cr, box_inverse(sf, cr.box[v3]).v);
  const auto& w = cr.sectors.sectors[out.sector];
  out.euler = w.ring.one();
  for (auto i : obstruction_support(t)) out.euler = w.ring.reduce(out.euler * w.restriction[i]);
  return out;
}

SectorVector product_rule(const StackyFan& sf, const CRRing& cr, const SectorVector& a, const SectorVector& b) {
  const auto& secs = cr.sectors.sectors;
  const std::size_t n = sf.ray_count();
  SectorVector out = zero_vector(cr);
  for (std::size_t s1 = 0; s1 < secs.size(); ++s1) {
    if (a.parts[s1].is_zero()) continue;
    for (std::size_t s2 = 0; s2 < secs.size(); ++s2) {
      if (b.parts[s2].is_zero()) continue;
      const auto& A = secs[s1];
      const auto& B = secs[s2];
      const std::size_t nb = A.ring.base_vars;
      for (const auto& [m1, c1] : a.parts[s1].terms()) {
        for (const auto& [m2, c2] : b.parts[s2].terms()) {
          IntVector e(n, Integer(0));
          std::set<std::size_t> support(A.v.sigma.begin(), A.v.sigma.end());
          support.insert(B.v.sigma.begin(), B.v.sigma.end());
          for (std::size_t k = 0; k < A.link_rays.size(); ++k) e[A.link_rays[k]] += m1[nb + k];
          for (std::size_t k = 0; k < B.link_rays.size(); ++k) e[B.link_rays[k]] += m2[nb + k];
          for (std::size_t i = 0; i < n; ++i)
            if (e[i] != 0) support.insert(i);
          if (!sf.fan().is_cone(Cone(support.begin(), support.end()))) continue;
          GroupElement c = A.v.v + B.v.v;
          for (std::size_t i = 0; i < n; ++i)
            if (e[i] != 0) c = c + sf.b(i).scaled(e[i]);
          const auto dec = decompose(sf, c);
          const std::size_t w = box_index(cr, dec.box.v);
          const auto& W = secs[w];
          Monomial base = m1;
          for (std::size_t i = 0; i < nb; ++i) base[i] += m2[i];
          Poly term = base_monomial(base, nb, W.ring).scaled(c1 * c2);
          for (std::size_t i = 0; i < n; ++i)
            if (dec.multiplicities[i] != 0)
              term = term * W.restriction[i].pow(static_cast<unsigned>(to_i64(dec.multiplicities[i])));
          out.parts[w] += term;
        }
      }
    }
  }
  for (std::size_t s = 0; s < secs.size(); ++s) out.parts[s] = secs[s].ring.reduce(out.parts[s]);
  return out;
}

SectorVector product_transport(const StackyFan& sf, const CRRing& cr, const SectorVector& a, const SectorVector& b) {
  const auto& secs = cr.sectors.sectors;
  SectorVector out = zero_vector(cr);
  for (std::size_t s1 = 0; s1 < secs.size(); ++s1) {
    if (a.parts[s1].is_zero()) continue;
    for (std::size_t s2 = 0; s2 < secs.size(); ++s2) {
      if (b.parts[s2].is_zero()) continue;
      for (const auto& tr : valid_triples(sf, cr, s1, s2)) {
        const auto& W = secs[tr.w];
        Poly p = transport(a.parts[s1], secs[s1], W) * transport(b.parts[s2], secs[s2], W);
        for (auto i : normal_rays(tr, cr)) p = W.ring.reduce(p * W.restriction[i]);
        for (auto i : obstruction_support(tr.t)) p = W.ring.reduce(p * W.restriction[i]);
        out.parts[tr.w] += p;
      }
    }
  }
  for (std::size_t s = 0; s < secs.size(); ++s) out.parts[s] = secs[s].ring.reduce(out.parts[s]);
  return out;
}

Poly to_global(const CRRing& cr, const SectorVector& a) {
  const auto& g = cr.global;
  Poly out = g.zero();
  for (std::size_t s = 0; s < a.parts.size(); ++s) {
    if (a.parts[s].is_zero()) continue;
    const auto& S = cr.sectors.sectors[s];
    std::vector<Poly> images;
    for (std::size_t i = 0; i < S.ring.base_vars; ++i) images.push_back(Poly::variable(g.nvars(), i, g.order));
    for (auto j : S.link_rays) images.push_back(Poly::variable(g.nvars(), cr.y_var[j], g.order));
    Poly p = substitute_into(a.parts[s], images, g.nvars(), g.order);
    if (cr.t_var[s]) p = p * Poly::variable(g.nvars(), *cr.t_var[s], g.order);
    out += p;
  }
  return g.reduce(out);
}

ProductReport cr_product_check(const StackyFan& sf, const CRRing& cr) {
  ProductReport report;
  const auto& secs = cr.sectors.sectors;
  struct Basis {
    std::size_t sector;
    Monomial m;
    SectorVector v;
  };
  std::vector<Basis> basis;
  for (std::size_t s = 0; s < secs.size(); ++s)
    for (const auto& m : secs[s].ring.qb.monomials) basis.push_back(Basis{s, m, basis_vector(cr, s, m)});

  std::vector<std::vector<Scalar>> columns;
  for (const auto& e : basis) columns.push_back(coordinates(to_global(cr, e.v), cr.global.gb, cr.global.qb));
  report.global_map_bijective =
      basis.size() == cr.global.dimension() && scalar_rank(columns) == cr.global.dimension();

  auto note = [&](std::string msg) {
    if (report.failures.size() < 20) report.failures.push_back(std::move(msg));
  };
  std::vector<std::vector<SectorVector>> table(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      ++report.products_checked;
      SectorVector rule = product_rule(sf, cr, basis[i].v, basis[j].v);
      const SectorVector moved = product_transport(sf, cr, basis[i].v, basis[j].v);
      const std::string where = describe(cr, basis[i].sector, basis[i].m) + " x " +
                                describe(cr, basis[j].sector, basis[j].m);
      if (!(rule == moved)) {
        ++report.mismatches;
        note("rule vs transport at " + where + ": " + to_string(rule, cr) + " vs " + to_string(moved, cr));
      }
      const Poly global = cr.global.reduce(to_global(cr, basis[i].v) * to_global(cr, basis[j].v));
      if (!(global == to_global(cr, rule))) {
        ++report.global_mismatches;
        note("rule vs global presentation at " + where);
      }
      table[i].push_back(std::move(rule));
    }
  }
  const std::size_t cap = 5000;
  for (std::size_t i = 0; i < basis.size() && report.associativity_checked < cap; ++i) {
    for (std::size_t j = 0; j < basis.size() && report.associativity_checked < cap; ++j) {
      for (std::size_t k = 0; k < basis.size() && report.associativity_checked < cap; ++k) {
        ++report.associativity_checked;
        const auto left = product_rule(sf, cr, table[i][j], basis[k].v);
        const auto right = product_rule(sf, cr, basis[i].v, table[j][k]);
        if (!(left == right)) {
          ++report.associativity_failures;
          note("associativity at " + describe(cr, basis[i].sector, basis[i].m) + ", " +
               describe(cr, basis[j].sector, basis[j].m) + ", " + describe(cr, basis[k].sector, basis[k].m));
        }
      }
    }
  }
  return report;
}

namespace {

// z in Q^{n+s} with [B | Q] z = v and z_i = alpha_i on the rays.
RatVector spectrum_vector(const StackyFan& sf, const BoxElement& v) {
  const std::size_t n = sf.ray_count();
  const auto& tor = sf.lattice().torsion();
  const std::size_t f = sf.lattice().free_rank();
  RatVector z(v.alphas.begin(), v.alphas.end());
  z.resize(n, Rational(0));
  for (std::size_t j = 0; j < tor.size(); ++j) {
    Rational t(v.v.coords()[f + j]);
    for (std::size_t i = 0; i < n; ++i) t -= z[i] * Rational(sf.b(i).coords()[f + j]);
    z.push_back(t / Rational(tor[j]));
  }
  return z;
}

Rational pairing(const RatVector& z, const IntVector& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * Rational(y[i]);
  return s;
}

// Values of the non-base K variables at the point of v.
std::vector<Scalar> point_values(const StackyFan& sf, const KRing& k, const BoxElement& v) {
  std::vector<Scalar> out;
  const auto& vars = k.ring.vars;
  if (k.laurent_in_x) {
    for (std::size_t i = k.ring.base_vars; i < vars.size(); ++i) {
      const std::string& name = vars.name(i);
      const bool inv = name.size() > 4 && name.compare(name.size() - 4, 4, "_inv") == 0;
      const std::size_t ray = std::stoul(name.substr(1, inv ? name.size() - 5 : std::string::npos)) - 1;
      const Rational a = v.alphas.at(ray);
      out.push_back(root_of_unity(inv ? -a : a));
    }
    return out;
  }
  const auto gd = gale_dual(sf.beta_min());
  const RatVector z = spectrum_vector(sf, v);
  for (std::size_t g = 0; g < gd.dg.generators(); ++g) {
    const Rational q = pairing(z, gd.section.column(g));
    out.push_back(root_of_unity(q));
    if (g < gd.dg.free_rank()) out.push_back(root_of_unity(-q));
  }
  return out;
}

}  // namespace

SpectrumReport spectrum_points(const StackyFan& sf, const KRing& k) {
  if (k.ring.base_vars != 0)
    throw Error(ErrorCode::InvalidArgument, "spectrum: the base must be a point");
  SpectrumReport out;
  Integer order = 1;
  for (const auto& v : box_total(sf)) {
    SpectrumPoint p{v, point_values(sf, k, v)};
    for (const auto& s : p.values) order = lcm(order, Integer(s.order()));
    out.points.push_back(std::move(p));
  }
  out.field_order = static_cast<unsigned>(to_i64(order));
  for (const auto& p : out.points) {
    std::vector<Poly> images;
    for (const auto& s : p.values) images.push_back(Poly::constant(0, s));
    for (const auto& rel : k.ring.relations) {
      ++out.relations_checked;
      if (!rel.substitute(images).is_zero()) ++out.relation_failures;
    }
  }
  for (std::size_t a = 0; a < out.points.size(); ++a)
    for (std::size_t b = a + 1; b < out.points.size(); ++b)
      if (out.points[a].values == out.points[b].values) out.distinct = false;
  return out;
}

ChernContext::ChernContext(const StackyFan& sf, const TwistSpec& twist, const KRing& k, const CRRing& cr)
    : sf_(sf), k_(k), cr_(cr) {
  if (!twist.base.chern_classes)
    throw Error(ErrorCode::InvalidArgument, "chern: the base carries no Chern class data for its K variables");
  if (!sf.lattice().is_torsion_free() && sf.ray_count() != 0)
    throw Error(ErrorCode::NonReduced, "chern: N has torsion; pass the reduced stacky fan");
  const auto& chern = *twist.base.chern_classes;
  const std::size_t nbk = twist.base.k.vars.size();
  if (chern.size() != nbk) throw Error(ErrorCode::InvalidArgument, "chern: one Chern class per base K variable");

  Integer order = 1;
  std::vector<std::vector<Scalar>> values;
  for (const auto& v : cr.box) {
    values.push_back(point_values(sf, k, v));
    for (const auto& s : values.back()) order = lcm(order, Integer(s.order()));
  }
  order_ = static_cast<unsigned>(to_i64(order));

  for (std::size_t s = 0; s < cr.box.size(); ++s) {
    const auto& S = cr.sectors.sectors[s];
    const std::size_t terms = S.ring.dimension() + 1;
    std::vector<Poly> img;
    for (std::size_t i = 0; i < nbk; ++i)
      img.push_back(series_at(series_exp(terms), lift_base(chern[i], S.ring.nvars()), s));
    const auto& vars = k.ring.vars;
    for (std::size_t i = nbk; i < vars.size(); ++i) {
      Poly p = Poly::constant(S.ring.nvars(), values[s][i - nbk], S.ring.order);
      if (k.laurent_in_x) {
        const std::string& name = vars.name(i);
        const bool inv = name.size() > 4 && name.compare(name.size() - 4, 4, "_inv") == 0;
        const std::size_t ray = std::stoul(name.substr(1, inv ? name.size() - 5 : std::string::npos)) - 1;
        const Poly y = inv ? -S.restriction[ray] : S.restriction[ray];
        p = S.ring.reduce(p * series_at(series_exp(terms), y, s));
      }
      img.push_back(std::move(p));
    }
    images_.push_back(std::move(img));

    Poly inv_todd = S.ring.one();
    for (auto i : S.v.sigma) {
      const Series f = series_pow(series_todd(terms), -S.v.alphas[i], terms);
      inv_todd = S.ring.reduce(inv_todd * series_at(f, S.restriction[i], s));
    }
    inverse_todd_.push_back(std::move(inv_todd));
  }
}

Poly ChernContext::series_at(const Series& f, const Poly& p, std::size_t sector) const {
  const auto& r = cr_.sectors.sectors.at(sector).ring;
  const Poly q = r.reduce(p);
  if (!q.coefficient(Monomial(r.nvars(), 0)).is_zero())
    throw Error(ErrorCode::InvalidArgument, "series evaluated at a class with nonzero constant term");
  Poly out = r.zero();
  Poly power = r.one();
  for (std::size_t k = 0; k < f.size() && !power.is_zero(); ++k) {
    if (f[k] != 0) out += power.scaled(Scalar(f[k]));
    power = r.reduce(power * q);
  }
  if (!power.is_zero()) throw Error(ErrorCode::InvalidArgument, "series truncated before the class became nilpotent");
  return r.reduce(out);
}

SectorVector ChernContext::ch(const Poly& k_class) const {
  if (k_class.nvars() != k_.ring.nvars()) throw Error(ErrorCode::InvalidArgument, "ch: class outside the K ring");
  SectorVector out;
  for (std::size_t s = 0; s < images_.size(); ++s) {
    const auto& r = cr_.sectors.sectors[s].ring;
    out.parts.push_back(r.reduce(substitute_into(k_class, images_[s], r.nvars(), r.order)));
  }
  return out;
}

SectorVector ChernContext::ch_orb(const Poly& k_class) const {
  SectorVector out = ch(k_class);
  for (std::size_t s = 0; s < out.parts.size(); ++s)
    out.parts[s] = cr_.sectors.sectors[s].ring.reduce(out.parts[s] * inverse_todd_[s]);
  return out;
}

ChernMatrix chern_character(const ChernContext& ctx) {
  ChernMatrix out;
  out.field_order = ctx.field_order();
  const auto& k = ctx.k().ring;
  const auto& secs = ctx.cr().sectors.sectors;
  std::vector<std::vector<Scalar>> columns;
  for (const auto& m : k.qb.monomials) {
    const auto v = ctx.ch_orb(Poly::term(m, Scalar(1), k.order));
    std::vector<Scalar> col;
    for (std::size_t s = 0; s < secs.size(); ++s) {
      const auto c = coordinates(v.parts[s], secs[s].ring.gb, secs[s].ring.qb);
      col.insert(col.end(), c.begin(), c.end());
    }
    columns.push_back(std::move(col));
  }
  const std::size_t rows = ctx.cr().sectors.total_dimension;
  out.matrix.assign(rows, std::vector<Scalar>(columns.size(), Scalar(0)));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) out.matrix[i][j] = columns[j][i];
  out.rank = scalar_rank(columns);
  out.bijective = columns.size() == rows && out.rank == rows;
  return out;
}

Poly lambda_identity_defect(const ChernContext& ctx, std::size_t sector, const std::vector<Poly>& classes) {
  const auto& r = ctx.cr().sectors.sectors.at(sector).ring;
  const std::size_t terms = r.dimension() + 1;
  Poly lhs = r.one();
  Poly rhs = r.one();
  for (const auto& c : classes) {
    const Poly td = ctx.series_at(series_todd(terms), c, sector);
    const Poly lambda = r.one() - ctx.series_at(series_exp(terms), -c, sector);
    lhs = r.reduce(lhs * td * lambda);
    rhs = r.reduce(rhs * c);
  }
  return r.reduce(lhs - rhs);
}

ChernRingReport chern_ring_check(const ChernContext& ctx) {
  ChernRingReport report;
  const auto& sf = ctx.sf();
  const auto& cr = ctx.cr();
  const auto& secs = cr.sectors.sectors;
  auto note = [&](std::string msg) {
    if (report.failures.size() < 20) report.failures.push_back(std::move(msg));
  };

  for (std::size_t s = 0; s < secs.size(); ++s) {
    for (std::size_t i = 0; i < sf.ray_count(); ++i) {
      if (secs[s].restriction[i].is_zero()) continue;
      ++report.lambda_identities;
      if (!lambda_identity_defect(ctx, s, {secs[s].restriction[i]}).is_zero()) {
        ++report.lambda_failures;
        note("lambda identity for Y" + std::to_string(i + 1) + " in sector " + std::to_string(s));
      }
    }
  }

  std::vector<std::vector<std::vector<Triple>>> triples(secs.size());
  for (std::size_t s1 = 0; s1 < secs.size(); ++s1)
    for (std::size_t s2 = 0; s2 < secs.size(); ++s2) triples[s1].push_back(valid_triples(sf, cr, s1, s2));

  for (std::size_t s1 = 0; s1 < secs.size(); ++s1) {
    for (std::size_t s2 = 0; s2 < secs.size(); ++s2) {
      for (const auto& tr : triples[s1][s2]) {
        const auto& W = secs[tr.w];
        const std::size_t terms = W.ring.dimension() + 1;
        const Cone ob = obstruction_support(tr.t);
        const Cone nrm = normal_rays(tr, cr);
        if (!ob.empty()) {
          std::vector<Poly> classes;
          for (auto i : ob) classes.push_back(W.restriction[i]);
          ++report.lambda_identities;
          if (!lambda_identity_defect(ctx, tr.w, classes).is_zero()) {
            ++report.lambda_failures;
            note("lambda identity for the obstruction bundle of triple (" + std::to_string(tr.v1) + ", " +
                 std::to_string(tr.v2) + ", " + std::to_string(tr.v3) + ")");
          }
        }
        Poly euler_nrm = W.ring.one();
        Poly td_nrm = W.ring.one();
        for (auto i : nrm) {
          euler_nrm = W.ring.reduce(euler_nrm * W.restriction[i]);
          td_nrm = W.ring.reduce(td_nrm * ctx.series_at(series_todd(terms), W.restriction[i], tr.w));
        }
        Poly literal = W.ring.reduce(transport(ctx.inverse_todd(s1), secs[s1], W) *
                                     transport(ctx.inverse_todd(s2), secs[s2], W));
        for (auto i : ob)
          literal = W.ring.reduce(literal * ctx.series_at(series_todd(terms), W.restriction[i], tr.w));
        const Poly full = W.ring.reduce(literal * td_nrm);
        ++report.todd_identities;
        if (!W.ring.reduce((full - ctx.inverse_todd(tr.w)) * euler_nrm).is_zero()) {
          ++report.todd_failures;
          note("Todd identity for triple (" + std::to_string(tr.v1) + ", " + std::to_string(tr.v2) + ", " +
               std::to_string(tr.v3) + ")");
        }
        if (!W.ring.reduce((literal - ctx.inverse_todd(tr.w)) * euler_nrm).is_zero()) ++report.todd_literal_failures;
      }
    }
  }

  // ch_orb(a * b) with the stringy K product, against the Chen-Ruan product of ch_orb(a) and ch_orb(b).
  const auto& k = ctx.k().ring;
  std::vector<Poly> kb;
  for (const auto& m : k.qb.monomials) kb.push_back(Poly::term(m, Scalar(1), k.order));
  std::vector<SectorVector> chs, orbs;
  for (const auto& p : kb) {
    chs.push_back(ctx.ch(p));
    orbs.push_back(ctx.ch_orb(p));
  }
  for (std::size_t a = 0; a < kb.size(); ++a) {
    for (std::size_t b = 0; b < kb.size(); ++b) {
      ++report.pairs_checked;
      SectorVector route1 = zero_vector(cr);
      for (std::size_t s1 = 0; s1 < secs.size(); ++s1) {
        for (std::size_t s2 = 0; s2 < secs.size(); ++s2) {
          for (const auto& tr : triples[s1][s2]) {
            const auto& W = secs[tr.w];
            const std::size_t terms = W.ring.dimension() + 1;
            Poly p = W.ring.reduce(transport(chs[a].parts[s1], secs[s1], W) * transport(chs[b].parts[s2], secs[s2], W));
            for (auto i : obstruction_support(tr.t))
              p = W.ring.reduce(p * (W.ring.one() - ctx.series_at(series_exp(terms), -W.restriction[i], tr.w)));
            for (auto i : normal_rays(tr, cr)) {
              const Series inv_td = series_pow(series_todd(terms), Rational(-1), terms);
              p = W.ring.reduce(p * ctx.series_at(inv_td, W.restriction[i], tr.w) * W.restriction[i]);
            }
            route1.parts[tr.w] += p;
          }
        }
      }
      for (std::size_t s = 0; s < secs.size(); ++s)
        route1.parts[s] = secs[s].ring.reduce(route1.parts[s] * ctx.inverse_todd(s));
      const SectorVector route2 = product_rule(sf, cr, orbs[a], orbs[b]);
      if (!(route1 == route2)) {
        ++report.pair_failures;
        note("ch_orb product mismatch for K basis elements " + std::to_string(a) + " and " + std::to_string(b));
      }
    }
  }
  return report;
}

}  // namespace stacktor

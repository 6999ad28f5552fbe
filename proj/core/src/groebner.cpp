#include "stacktor/groebner.hpp"

#include "stacktor/errors.hpp"
#include "stacktor/linalg.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace stacktor {

namespace {

Poly reduce_by(Poly w, const std::vector<const Poly*>& divisors) {
  Poly rem(w.nvars(), w.order());
  while (!w.is_zero()) {
    const Monomial m = w.leading_monomial();
    const Scalar c = w.leading_coefficient();
    const Poly* div = nullptr;
    for (const Poly* g : divisors) {
      if (monomial_divides(g->leading_monomial(), m)) {
        div = g;
        break;
      }
    }
    if (div) {
      w -= div->times_term(monomial_quotient(m, div->leading_monomial()), c / div->leading_coefficient());
    } else {
      rem.add_term(m, c);
      w.add_term(m, -c);
    }
  }
  return rem;
}

struct Pair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
  std::uint64_t sugar;
};

class Buchberger {
 public:
  Buchberger(std::size_t nvars, MonomialOrder order, const GroebnerOptions& options)
      : nvars_(nvars), order_(order), options_(options) {}

  GroebnerBasis run(const std::vector<Poly>& generators) {
    std::vector<Poly> gens;
    for (const auto& f : generators) {
      if (f.nvars() != nvars_) throw Error(ErrorCode::InvalidArgument, "groebner: generator in wrong ring");
      if (!f.is_zero()) gens.push_back(f.with_order(order_));
    }
    std::sort(gens.begin(), gens.end(), [&](const Poly& a, const Poly& b) {
      return monomial_less(a.leading_monomial(), b.leading_monomial(), order_);
    });
    for (const auto& f : gens) {
      Poly h = reduce_by(f, active_polys());
      if (!h.is_zero()) insert(h.monic(), h.total_degree());
    }
    while (!pairs_.empty()) {
      auto best = pairs_.begin();
      for (auto it = pairs_.begin(); it != pairs_.end(); ++it) {
        if (it->sugar < best->sugar ||
            (it->sugar == best->sugar && monomial_less(it->lcm, best->lcm, order_)))
          best = it;
      }
      const Pair p = *best;
      pairs_.erase(best);
      if (++processed_ > options_.max_pairs) {
        throw Error(ErrorCode::ResourceLimit,
                    "groebner: pair limit " + std::to_string(options_.max_pairs) + " reached with " +
                        std::to_string(active_polys().size()) + " basis elements and " +
                        std::to_string(pairs_.size()) + " pairs pending");
      }
      Poly h = reduce_by(s_polynomial(polys_[p.i], polys_[p.j]), active_polys());
      if (!h.is_zero()) insert(h.monic(), std::max<std::uint64_t>(p.sugar, h.total_degree()));
    }
    return finish();
  }

 private:
  std::vector<const Poly*> active_polys() const {
    std::vector<const Poly*> out;
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (active_[k]) out.push_back(&polys_[k]);
    return out;
  }

  std::uint64_t pair_sugar(std::size_t i, std::size_t j, const Monomial& l) const {
    const auto d = monomial_degree(l);
    return std::max(sugar_[i] + d - monomial_degree(polys_[i].leading_monomial()),
                    sugar_[j] + d - monomial_degree(polys_[j].leading_monomial()));
  }

  // Gebauer-Moeller update.
  void insert(Poly h, std::uint64_t sugar) {
    const std::size_t hi = polys_.size();
    polys_.push_back(std::move(h));
    sugar_.push_back(sugar);
    active_.push_back(true);
    const Monomial& lh = polys_[hi].leading_monomial();

    std::vector<Pair> c;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active_[g]) continue;
      const Monomial l = monomial_lcm(lh, polys_[g].leading_monomial());
      c.push_back(Pair{g, hi, l, pair_sugar(g, hi, l)});
    }
    std::vector<Pair> d;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Pair& p = c[k];
      bool keep = monomials_coprime(lh, polys_[p.i].leading_monomial());
      if (!keep) {
        keep = true;
        for (std::size_t q = k + 1; q < c.size() && keep; ++q)
          if (monomial_divides(c[q].lcm, p.lcm)) keep = false;
        for (std::size_t q = 0; q < d.size() && keep; ++q)
          if (monomial_divides(d[q].lcm, p.lcm)) keep = false;
      }
      if (keep) d.push_back(p);
    }
    std::vector<Pair> e;
    for (auto& p : d)
      if (!monomials_coprime(lh, polys_[p.i].leading_monomial())) e.push_back(std::move(p));

    std::vector<Pair> kept;
    for (auto& p : pairs_) {
      const bool drop = monomial_divides(lh, p.lcm) &&
                        monomial_lcm(polys_[p.i].leading_monomial(), lh) != p.lcm &&
                        monomial_lcm(lh, polys_[p.j].leading_monomial()) != p.lcm;
      if (!drop) kept.push_back(std::move(p));
    }
    for (auto& p : e) kept.push_back(std::move(p));
    pairs_ = std::move(kept);

    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && monomial_divides(lh, polys_[g].leading_monomial())) active_[g] = false;
  }

  GroebnerBasis finish() {
    std::vector<Poly> g;
    for (const Poly* p : active_polys()) g.push_back(*p);
    // Minimalize, then interreduce.
    std::vector<Poly> minimal;
    for (std::size_t k = 0; k < g.size(); ++k) {
      bool redundant = false;
      for (std::size_t l = 0; l < g.size() && !redundant; ++l) {
        if (l == k) continue;
        const auto& a = g[l].leading_monomial();
        const auto& b = g[k].leading_monomial();
        if (monomial_divides(a, b) && (a != b || l < k)) redundant = true;
      }
      if (!redundant) minimal.push_back(g[k]);
    }
    for (std::size_t k = 0; k < minimal.size(); ++k) {
      std::vector<const Poly*> others;
      for (std::size_t l = 0; l < minimal.size(); ++l)
        if (l != k) others.push_back(&minimal[l]);
      minimal[k] = reduce_by(minimal[k], others).monic();
    }
    std::sort(minimal.begin(), minimal.end(), [&](const Poly& a, const Poly& b) {
      return monomial_less(a.leading_monomial(), b.leading_monomial(), order_);
    });
    GroebnerBasis out;
    out.nvars = nvars_;
    out.order = order_;
    out.polys = std::move(minimal);
    out.pairs_processed = processed_;
    return out;
  }

  std::size_t nvars_;
  MonomialOrder order_;
  GroebnerOptions options_;
  std::vector<Poly> polys_;
  std::vector<std::uint64_t> sugar_;
  std::vector<bool> active_;
  std::vector<Pair> pairs_;
  std::size_t processed_ = 0;
};

}  // namespace

bool GroebnerBasis::is_unit_ideal() const {
  return polys.size() == 1 && polys.front().is_constant() && !polys.front().is_zero();
}

Poly s_polynomial(const Poly& f, const Poly& g) {
  const Monomial l = monomial_lcm(f.leading_monomial(), g.leading_monomial());
  return f.times_term(monomial_quotient(l, f.leading_monomial()), f.leading_coefficient().inverse()) -
         g.times_term(monomial_quotient(l, g.leading_monomial()), g.leading_coefficient().inverse());
}

GroebnerBasis groebner(const std::vector<Poly>& generators, std::size_t nvars, MonomialOrder order,
                       const GroebnerOptions& options) {
  return Buchberger(nvars, order, options).run(generators);
}

Poly normal_form(const Poly& p, const GroebnerBasis& g) {
  if (p.nvars() != g.nvars) throw Error(ErrorCode::InvalidArgument, "normal_form: polynomial in wrong ring");
  std::vector<const Poly*> divisors;
  for (const auto& q : g.polys) divisors.push_back(&q);
  return reduce_by(p.order() == g.order ? p : p.with_order(g.order), divisors);
}

bool ideal_contains(const GroebnerBasis& g, const Poly& p) { return normal_form(p, g).is_zero(); }

QuotientBasis quotient_basis(const GroebnerBasis& g) {
  QuotientBasis out;
  std::vector<Monomial> leads;
  for (const auto& p : g.polys) leads.push_back(p.leading_monomial());
  auto standard = [&](const Monomial& m) {
    return std::none_of(leads.begin(), leads.end(), [&](const Monomial& l) { return monomial_divides(l, m); });
  };
  for (std::size_t i = 0; i < g.nvars; ++i) {
    const bool bounded = std::any_of(leads.begin(), leads.end(), [&](const Monomial& l) {
      for (std::size_t k = 0; k < l.size(); ++k)
        if (k != i && l[k]) return false;
      return l[i] > 0;
    });
    if (!bounded && !g.is_unit_ideal()) return out;
  }
  out.finite = true;
  const Monomial unit(g.nvars, 0);
  if (!standard(unit)) return out;
  std::set<Monomial> seen{unit};
  std::deque<Monomial> queue{unit};
  while (!queue.empty()) {
    Monomial m = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < g.nvars; ++i) {
      ++m[i];
      if (!seen.count(m) && standard(m)) {
        seen.insert(m);
        queue.push_back(m);
      }
      --m[i];
    }
  }
  out.monomials.assign(seen.begin(), seen.end());
  std::sort(out.monomials.begin(), out.monomials.end(),
            [&](const Monomial& a, const Monomial& b) { return monomial_less(a, b, g.order); });
  return out;
}

std::vector<Scalar> coordinates(const Poly& p, const GroebnerBasis& g, const QuotientBasis& basis) {
  const Poly nf = normal_form(p, g);
  std::vector<Scalar> out(basis.monomials.size(), Scalar(0));
  for (const auto& [m, c] : nf.terms()) {
    const auto it = std::lower_bound(basis.monomials.begin(), basis.monomials.end(), m,
                                     [&](const Monomial& a, const Monomial& b) { return monomial_less(a, b, g.order); });
    if (it == basis.monomials.end() || *it != m)
      throw Error(ErrorCode::InvalidArgument, "coordinates: normal form outside the quotient basis");
    out[static_cast<std::size_t>(it - basis.monomials.begin())] = c;
  }
  return out;
}

std::size_t scalar_rank(const std::vector<std::vector<Scalar>>& rows) {
  if (rows.empty()) return 0;
  return rref(FieldMatrix<Scalar>(rows)).pivot_cols.size();
}

RingMapReport ring_map_check(const std::vector<Poly>& images, const std::vector<Poly>& source_relations,
                             const GroebnerBasis& target, const GroebnerBasis* source) {
  RingMapReport report;
  for (std::size_t k = 0; k < source_relations.size(); ++k) {
    const Poly nf = normal_form(source_relations[k].substitute(images), target);
    if (!nf.is_zero()) {
      report.ok = false;
      report.failing_relation = k;
      report.failing_image = nf;
      return report;
    }
  }
  if (!source) return report;
  const auto qs = quotient_basis(*source);
  const auto qt = quotient_basis(target);
  if (!qs.finite || !qt.finite) return report;
  report.source_dimension = qs.dimension();
  report.target_dimension = qt.dimension();
  if (qs.dimension() != qt.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "ring map: source dimension " + std::to_string(qs.dimension()) +
                                                  " and target dimension " + std::to_string(qt.dimension()));
  }
  std::vector<std::vector<Scalar>> columns;
  for (const auto& m : qs.monomials) {
    columns.push_back(coordinates(Poly::term(m, Scalar(1), source->order).substitute(images), target, qt));
  }
  report.bijective = scalar_rank(columns) == qt.dimension();
  return report;
}

}  // namespace stacktor

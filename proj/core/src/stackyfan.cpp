#include "stacktor/stackyfan.hpp"

#include "stacktor/linalg.hpp"

#include <algorithm>
#include <map>

namespace stacktor {

namespace {

RatVector to_rational(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

// Coefficients of p in the vectors b-bar_i, i in sigma.
std::optional<RatVector> bbar_coordinates(const StackyFan& sf, const Cone& sigma, const RatVector& p) {
  if (sigma.empty()) {
    const bool zero = std::all_of(p.begin(), p.end(), [](const Rational& x) { return x == 0; });
    return zero ? std::optional<RatVector>(RatVector{}) : std::nullopt;
  }
  FieldMatrix<Rational> a(sf.rank(), std::vector<Rational>(sigma.size()));
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const auto col = sf.bbar(sigma[k]);
    for (std::size_t i = 0; i < sf.rank(); ++i) a[i][k] = Rational(col[i]);
  }
  return solve(a, p, sigma.size());
}

// Writes c = v + sum floor(coeff_i) b_i over the cone and returns v as a Box element.
BoxElement reduce_into_box(const StackyFan& sf, const GroupElement& c, const Cone& cone, const RatVector& coeffs,
                           IntVector* multiplicities) {
  BoxElement out;
  out.alphas.assign(sf.ray_count(), Rational(0));
  GroupElement v = c;
  if (multiplicities) multiplicities->assign(sf.ray_count(), Integer(0));
  for (std::size_t k = 0; k < cone.size(); ++k) {
    const Integer fl = floor(coeffs[k]);
    const Rational fr = coeffs[k] - Rational(fl);
    if (fl != 0) v = v - sf.b(cone[k]).scaled(fl);
    if (multiplicities) (*multiplicities)[cone[k]] = fl;
    out.alphas[cone[k]] = fr;
    if (fr != 0) out.sigma.push_back(cone[k]);
  }
  out.v = v;
  return out;
}

}  // namespace

StackyFan::StackyFan(FgAbelianGroup n, Fan fan, std::vector<GroupElement> b)
    : n_(std::move(n)), fan_(std::move(fan)), b_(std::move(b)) {
  if (fan_.ambient_rank() != n_.free_rank()) {
    throw Error(ErrorCode::InvalidArgument, "stacky fan: fan rank differs from rank of N");
  }
  if (b_.size() < fan_.ray_count()) {
    throw Error(ErrorCode::InvalidArgument, "stacky fan: fewer b vectors than rays");
  }
  for (const auto& x : b_) {
    if (!(x.parent() == n_)) throw Error(ErrorCode::InvalidArgument, "stacky fan: b vector outside N");
  }
}

IntVector StackyFan::bbar(std::size_t i) const { return b_.at(i).free_part(); }

GroupHom StackyFan::beta() const {
  std::vector<IntVector> cols;
  for (const auto& x : b_) cols.push_back(x.coords());
  return GroupHom(FgAbelianGroup::free(b_.size()), n_, IntMatrix::from_columns(n_.generators(), cols));
}

GroupHom StackyFan::beta_min() const {
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < ray_count(); ++i) cols.push_back(b_[i].coords());
  return GroupHom(FgAbelianGroup::free(ray_count()), n_, IntMatrix::from_columns(n_.generators(), cols));
}

ValidationReport validate(const StackyFan& sf) {
  ValidationReport report;
  for (std::size_t i = 0; i < sf.ray_count(); ++i) {
    const IntVector bb = sf.bbar(i);
    const IntVector& r = sf.fan().ray(i);
    // b-bar_i must be a positive multiple of the ray direction.
    bool ok = std::any_of(bb.begin(), bb.end(), [](const Integer& x) { return x != 0; });
    Integer dot = 0;
    for (std::size_t k = 0; k < bb.size(); ++k) dot += bb[k] * r[k];
    if (ok && dot <= 0) ok = false;
    for (std::size_t p = 0; ok && p < bb.size(); ++p)
      for (std::size_t q = p + 1; q < bb.size(); ++q)
        if (bb[p] * r[q] != bb[q] * r[p]) ok = false;
    if (!ok) {
      report.issues.push_back({ErrorCode::RayMismatch, i,
                               "RayMismatch(" + std::to_string(i + 1) + "): b-bar_" + std::to_string(i + 1) +
                                   " does not generate ray " + std::to_string(i + 1)});
    }
  }
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < sf.rank(); ++i) free_rows.push_back(i);
  if (rational_rank(sf.beta().matrix().select_rows(free_rows)) < sf.rank()) {
    report.issues.push_back({ErrorCode::NonFiniteCokernel, std::nullopt, "NonFiniteCokernel: beta has infinite cokernel"});
  }
  return report;
}

void require_valid(const StackyFan& sf) {
  const auto report = validate(sf);
  if (!report.ok()) throw Error(report.issues.front().code, report.issues.front().message);
}

StackyFan minimal(const StackyFan& sf) {
  std::vector<GroupElement> b(sf.b().begin(), sf.b().begin() + static_cast<std::ptrdiff_t>(sf.ray_count()));
  return StackyFan(sf.lattice(), sf.fan(), std::move(b));
}

StackyFan reduced(const StackyFan& sf) {
  const auto nbar = FgAbelianGroup::free(sf.rank());
  std::vector<GroupElement> b;
  for (std::size_t i = 0; i < sf.ray_count(); ++i) b.emplace_back(nbar, sf.bbar(i));
  return StackyFan(nbar, sf.fan(), std::move(b));
}

Rational BoxElement::age() const {
  Rational s = 0;
  for (const auto& a : alphas) s += a;
  return s;
}

bool box_order(const BoxElement& a, const BoxElement& b) {
  if (a.sigma.size() != b.sigma.size()) return a.sigma.size() < b.sigma.size();
  if (a.sigma != b.sigma) return a.sigma < b.sigma;
  if (a.alphas != b.alphas) return a.alphas < b.alphas;
  return a.v.coords() < b.v.coords();
}

std::vector<BoxElement> box(const StackyFan& sf, const Cone& sigma) {
  if (!sf.fan().is_cone(sigma)) throw Error(ErrorCode::InvalidArgument, "box: not a cone of the fan");
  std::vector<IntVector> cols;
  for (auto i : sigma) cols.push_back(sf.b(i).coords());
  const GroupHom inclusion(FgAbelianGroup::free(sigma.size()), sf.lattice(),
                           IntMatrix::from_columns(sf.lattice().generators(), cols));
  const auto coker = cokernel(inclusion);
  std::vector<BoxElement> out;
  for (const auto& t : coker.group.torsion_elements()) {
    const GroupElement w(sf.lattice(), coker.section.apply(t));
    const auto coeffs = bbar_coordinates(sf, sigma, to_rational(w.free_part()));
    if (!coeffs) throw Error(ErrorCode::InvalidArgument, "box: torsion class does not lie over span(sigma)");
    out.push_back(reduce_into_box(sf, w, sigma, *coeffs, nullptr));
  }
  std::sort(out.begin(), out.end(), box_order);
  return out;
}

std::vector<BoxElement> box_total(const StackyFan& sf) {
  std::vector<BoxElement> all;
  for (const auto& c : sf.fan().max_cones()) {
    for (auto& e : box(sf, c)) {
      if (std::none_of(all.begin(), all.end(), [&](const BoxElement& x) { return x.v == e.v; })) {
        all.push_back(std::move(e));
      }
    }
  }
  std::sort(all.begin(), all.end(), box_order);
  return all;
}

BoxElement box_inverse(const StackyFan& sf, const BoxElement& v) {
  BoxElement w;
  w.sigma = v.sigma;
  w.alphas.assign(sf.ray_count(), Rational(0));
  GroupElement acc = -v.v;
  for (auto i : v.sigma) {
    acc = acc + sf.b(i);
    w.alphas[i] = Rational(1) - v.alphas[i];
  }
  w.v = acc;
  return w;
}

BoxDecomposition decompose(const StackyFan& sf, const GroupElement& c) {
  const RatVector p = to_rational(c.free_part());
  for (const auto& cone : sf.fan().max_cones()) {
    const auto coeffs = bbar_coordinates(sf, cone, p);
    if (!coeffs) continue;
    if (std::any_of(coeffs->begin(), coeffs->end(), [](const Rational& x) { return x < 0; })) continue;
    BoxDecomposition out;
    for (std::size_t k = 0; k < cone.size(); ++k)
      if ((*coeffs)[k] > 0) out.cone.push_back(cone[k]);
    out.box = reduce_into_box(sf, c, cone, *coeffs, &out.multiplicities);
    return out;
  }
  throw Error(ErrorCode::NotInSupport, "decompose: element lies outside the support of the fan");
}

QuotientStackyFan quotient(const StackyFan& sf, const Cone& sigma) {
  std::vector<IntVector> cols;
  for (auto i : sigma) cols.push_back(sf.b(i).coords());
  const GroupHom inclusion(FgAbelianGroup::free(sigma.size()), sf.lattice(),
                           IntMatrix::from_columns(sf.lattice().generators(), cols));
  auto coker = cokernel(inclusion);
  const auto& target = coker.group;

  std::vector<std::size_t> free_rows, free_cols;
  for (std::size_t i = 0; i < target.free_rank(); ++i) free_rows.push_back(i);
  for (std::size_t j = 0; j < sf.rank(); ++j) free_cols.push_back(j);
  const IntMatrix fan_projection = coker.projection.matrix().select_rows(free_rows).select_columns(free_cols);
  auto qf = quotient_fan(sf.fan(), sigma, fan_projection);

  QuotientStackyFan out;
  out.sigma = sigma;
  out.link_ray_count = qf.parent_rays.size();
  std::vector<GroupElement> b;
  for (auto j : qf.parent_rays) {
    b.push_back(coker.projection(sf.b(j)));
    out.parent_columns.push_back(j);
  }
  for (std::size_t j = sf.ray_count(); j < sf.size(); ++j) {
    b.push_back(coker.projection(sf.b(j)));
    out.parent_columns.push_back(j);
  }
  out.sf = StackyFan(target, std::move(qf.fan), std::move(b));
  out.projection = std::move(coker.projection);
  require_valid(out.sf);
  return out;
}

std::vector<Sector> sectors(const StackyFan& sf) {
  std::vector<Sector> out;
  for (auto& v : box_total(sf)) {
    auto q = quotient(sf, v.sigma);
    out.push_back(Sector{std::move(v), std::move(q)});
  }
  return out;
}

TripleCoefficients triple_coefficients(const StackyFan& sf, const BoxElement& v1, const BoxElement& v2,
                                       const BoxElement& v3) {
  TripleCoefficients out;
  out.sigma = cone_union(cone_union(v1.sigma, v2.sigma), v3.sigma);
  out.a.assign(sf.ray_count(), Integer(0));
  if (!sf.fan().is_cone(out.sigma)) {
    out.failure = TripleFailure::NoCommonCone;
    return out;
  }
  GroupElement rest = v1.v + v2.v + v3.v;
  for (auto i : out.sigma) {
    const Rational s = v1.alphas[i] + v2.alphas[i] + v3.alphas[i];
    if (!is_integral(s)) {
      out.failure = TripleFailure::NonIntegral;
      return out;
    }
    out.a[i] = numerator_of(s);
    rest = rest - sf.b(i).scaled(out.a[i]);
  }
  if (!rest.is_zero()) out.failure = TripleFailure::TorsionMismatch;
  return out;
}

}  // namespace stacktor

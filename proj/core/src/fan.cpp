#include "stacktor/fan.hpp"

#include "stacktor/linalg.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

namespace stacktor {

namespace {

FieldMatrix<Rational> to_rational(const IntMatrix& m) {
  FieldMatrix<Rational> out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = Rational(m(i, j));
  return out;
}

std::string cone_text(const Cone& c) {
  std::string s = "{";
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k]);
  return s + "}";
}

// True if some nonzero z >= 0 satisfies c z = 0.
bool has_nonnegative_kernel_vector(const FieldMatrix<Rational>& c, std::size_t cols) {
  for (std::uint64_t support = 1; support < (std::uint64_t{1} << cols); ++support) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < cols; ++j)
      if (support & (std::uint64_t{1} << j)) idx.push_back(j);
    FieldMatrix<Rational> sub(c.size(), std::vector<Rational>(idx.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) sub[i][k] = c[i][idx[k]];
    const auto ker = nullspace(sub, idx.size());
    if (ker.size() != 1) continue;
    const auto& v = ker[0];
    const bool pos = std::all_of(v.begin(), v.end(), [](const Rational& x) { return x > 0; });
    const bool neg = std::all_of(v.begin(), v.end(), [](const Rational& x) { return x < 0; });
    if (pos || neg) return true;
  }
  return false;
}

}  // namespace

std::uint64_t cone_mask(const Cone& c) {
  std::uint64_t m = 0;
  for (auto i : c) m |= std::uint64_t{1} << i;
  return m;
}

Cone cone_from_mask(std::uint64_t mask) {
  Cone c;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) c.push_back(i);
  return c;
}

Cone cone_union(const Cone& a, const Cone& b) { return cone_from_mask(cone_mask(a) | cone_mask(b)); }

bool cone_contains(const Cone& big, const Cone& small) {
  return (cone_mask(small) & ~cone_mask(big)) == 0;
}

IntVector primitive(IntVector v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

Fan::Fan(std::size_t ambient_rank, std::vector<IntVector> rays, std::vector<Cone> max_cones)
    : ambient_rank_(ambient_rank), rays_(std::move(rays)) {
  if (rays_.size() > 60) throw Error(ErrorCode::InvalidFan, "fan: more than 60 rays is not supported");
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    if (rays_[i].size() != ambient_rank_) {
      throw Error(ErrorCode::InvalidFan, "fan: ray " + std::to_string(i) + " has wrong dimension");
    }
    if (std::all_of(rays_[i].begin(), rays_[i].end(), [](const Integer& x) { return x == 0; })) {
      throw Error(ErrorCode::InvalidFan, "fan: ray " + std::to_string(i) + " is zero");
    }
  }
  cone_masks_.insert(0);
  for (auto& c : max_cones) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (auto i : c)
      if (i >= rays_.size()) throw Error(ErrorCode::InvalidFan, "fan: cone refers to unknown ray");
    const std::uint64_t m = cone_mask(c);
    for (std::uint64_t sub = m;; sub = (sub - 1) & m) {
      cone_masks_.insert(sub);
      if (sub == 0) break;
    }
  }
  for (std::size_t i = 0; i < rays_.size(); ++i) cone_masks_.insert(std::uint64_t{1} << i);

  for (auto m : cone_masks_) cones_.push_back(cone_from_mask(m));
  std::sort(cones_.begin(), cones_.end(), [](const Cone& a, const Cone& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& c : cones_) {
    const std::uint64_t m = cone_mask(c);
    bool maximal = true;
    for (std::size_t i = 0; i < rays_.size() && maximal; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (!(m & bit) && cone_masks_.count(m | bit)) maximal = false;
    }
    if (maximal) max_cones_.push_back(c);
  }
  check_simplicial();
  check_intersections();
}

std::vector<Cone> Fan::top_cones() const {
  std::vector<Cone> out;
  for (const auto& c : max_cones_)
    if (c.size() == ambient_rank_) out.push_back(c);
  return out;
}

bool Fan::is_cone(const Cone& c) const { return cone_masks_.count(cone_mask(c)) > 0; }

IntMatrix Fan::ray_matrix(const Cone& c) const {
  std::vector<IntVector> cols;
  for (auto i : c) cols.push_back(rays_[i]);
  return IntMatrix::from_columns(ambient_rank_, cols);
}

std::optional<RatVector> Fan::coordinates_in(const Cone& c, const RatVector& p) const {
  if (c.empty()) {
    const bool zero = std::all_of(p.begin(), p.end(), [](const Rational& x) { return x == 0; });
    return zero ? std::optional<RatVector>(RatVector{}) : std::nullopt;
  }
  return solve(to_rational(ray_matrix(c)), p, c.size());
}

void Fan::check_simplicial() const {
  for (const auto& c : max_cones_) {
    if (c.size() > ambient_rank_ || rational_rank(ray_matrix(c)) != c.size()) {
      throw Error(ErrorCode::InvalidFan, "fan: cone " + cone_text(c) + " is not simplicial");
    }
  }
}

void Fan::check_intersections() const {
  for (std::size_t a = 0; a < max_cones_.size(); ++a) {
    for (std::size_t b = a + 1; b < max_cones_.size(); ++b) {
      const auto& s = max_cones_[a];
      const auto& t = max_cones_[b];
      Cone shared, only_s, only_t;
      std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(shared));
      std::set_difference(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(only_s));
      std::set_difference(t.begin(), t.end(), s.begin(), s.end(), std::back_inserter(only_t));
      // Project away span(shared), then look for a nonnegative relation
      // sum_{only_s} l_i r_i = sum_{only_t} m_j r_j.
      IntMatrix w;
      if (shared.empty()) {
        w = IntMatrix::identity(ambient_rank_);
      } else {
        w = integer_kernel(ray_matrix(shared).transpose()).transpose();
      }
      std::vector<IntVector> cols;
      for (auto i : only_s) cols.push_back(rays_[i]);
      for (auto j : only_t) {
        IntVector neg = rays_[j];
        for (auto& x : neg) x = -x;
        cols.push_back(neg);
      }
      const IntMatrix c = w * IntMatrix::from_columns(ambient_rank_, cols);
      if (has_nonnegative_kernel_vector(to_rational(c), cols.size())) {
        throw Error(ErrorCode::InvalidFan,
                    "fan: cones " + cone_text(s) + " and " + cone_text(t) + " overlap improperly");
      }
    }
  }
}

Cone minimal_cone_containing(const Fan& fan, const std::vector<RatVector>& points) {
  Cone result;
  for (const auto& p : points) {
    std::optional<Cone> support;
    for (const auto& c : fan.max_cones()) {
      const auto coeffs = fan.coordinates_in(c, p);
      if (!coeffs) continue;
      if (std::any_of(coeffs->begin(), coeffs->end(), [](const Rational& x) { return x < 0; })) continue;
      Cone s;
      for (std::size_t k = 0; k < c.size(); ++k)
        if ((*coeffs)[k] > 0) s.push_back(c[k]);
      support = s;
      break;
    }
    if (!support) throw Error(ErrorCode::NotInSupport, "point lies outside the support of the fan");
    result = cone_union(result, *support);
  }
  if (!fan.is_cone(result)) throw Error(ErrorCode::NoCommonCone, "points share no common cone");
  return result;
}

std::vector<Cone> link(const Fan& fan, const Cone& sigma) {
  if (!fan.is_cone(sigma)) throw Error(ErrorCode::InvalidArgument, "link: not a cone of the fan");
  const std::uint64_t s = cone_mask(sigma);
  std::vector<Cone> out;
  for (const auto& tau : fan.cones()) {
    const std::uint64_t t = cone_mask(tau);
    if ((t & s) == 0 && fan.is_cone_mask(t | s)) out.push_back(tau);
  }
  return out;
}

QuotientFan quotient_fan(const Fan& fan, const Cone& sigma) {
  const auto p = present(fan.ray_matrix(sigma));
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < p.group.free_rank(); ++i) free_rows.push_back(i);
  return quotient_fan(fan, sigma, p.to_group.select_rows(free_rows));
}

QuotientFan quotient_fan(const Fan& fan, const Cone& sigma, const IntMatrix& projection) {
  const auto lk = link(fan, sigma);
  std::vector<std::size_t> parent_rays;
  for (const auto& tau : lk)
    if (tau.size() == 1) parent_rays.push_back(tau[0]);
  std::map<std::size_t, std::size_t> new_index;
  for (std::size_t k = 0; k < parent_rays.size(); ++k) new_index[parent_rays[k]] = k;

  std::vector<IntVector> rays;
  for (auto j : parent_rays) rays.push_back(primitive(projection.apply(fan.ray(j))));
  std::vector<Cone> cones;
  for (const auto& tau : lk) {
    Cone c;
    for (auto j : tau) c.push_back(new_index.at(j));
    cones.push_back(c);
  }
  return QuotientFan{Fan(projection.rows(), std::move(rays), std::move(cones)), std::move(parent_rays),
                     projection};
}

std::vector<Cone> primitive_nonfaces(const Fan& fan) {
  const std::size_t n = fan.ray_count();
  const std::size_t max_size = std::min(n, fan.ambient_rank() + 1);
  std::vector<Cone> out;
  // Subsets in order of size, lexicographic within a size.
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= max_size; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      const Cone c(idx.begin(), idx.end());
      const std::uint64_t m = cone_mask(c);
      if (!fan.is_cone_mask(m)) {
        bool minimal = true;
        for (auto i : c)
          if (!fan.is_cone_mask(m & ~(std::uint64_t{1} << i))) minimal = false;
        if (minimal) out.push_back(c);
      }
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return out;
}

bool is_complete(const Fan& fan) {
  const std::size_t d = fan.ambient_rank();
  if (d == 0) return true;
  const auto tops = fan.top_cones();
  if (tops.empty() || tops.size() != fan.max_cones().size()) return false;
  std::map<Cone, int> facet_count;
  for (const auto& c : tops) {
    for (std::size_t drop = 0; drop < c.size(); ++drop) {
      Cone f;
      for (std::size_t k = 0; k < c.size(); ++k)
        if (k != drop) f.push_back(c[k]);
      ++facet_count[f];
    }
  }
  return std::all_of(facet_count.begin(), facet_count.end(), [](const auto& kv) { return kv.second == 2; });
}

}  // namespace stacktor

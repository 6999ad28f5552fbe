#include "stacktor/serialize.hpp"

#include "stacktor/errors.hpp"

#include <limits>

namespace stacktor {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Schema, path + ": " + what);
}

void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
}

void expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
}

void allow_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) schema_error(path, "unknown key \"" + it.key() + "\"");
  }
}

const Json& require_key(const Json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing key \"") + key + "\"");
  return *it;
}

Integer integer_from(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Integer(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return Integer(v.get<std::uint64_t>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Integer(s);
  }
  schema_error(path, "expected an integer");
}

std::size_t index_from(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    schema_error(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

IntVector int_vector_from(const Json& v, const std::string& path, std::optional<std::size_t> length = std::nullopt) {
  expect_array(v, path);
  if (length && v.size() != *length)
    schema_error(path, "expected " + std::to_string(*length) + " entries, found " + std::to_string(v.size()));
  IntVector out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer_from(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Rational rational_from(const Json& v, const std::string& path) {
  if (v.is_number_integer() || v.is_number_unsigned()) return Rational(integer_from(v, path));
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    const Json num = s.substr(0, slash);
    if (slash == std::string::npos) return Rational(integer_from(num, path));
    const Integer den = integer_from(Json(s.substr(slash + 1)), path);
    if (den == 0) schema_error(path, "zero denominator");
    return Rational(integer_from(num, path), den);
  }
  schema_error(path, "expected an integer or a rational string");
}

std::string string_from(const Json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected a string");
  return v.get<std::string>();
}

RingPresentation ring_from_json(const Json& j, const std::string& path, std::vector<Poly>* augmentation) {
  expect_object(j, path);
  allow_keys(j, {"variables", "relations", "augmentation"}, path);
  RingPresentation r;
  const auto& vars = require_key(j, "variables", path);
  expect_array(vars, path + ".variables");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string p = path + ".variables[" + std::to_string(i) + "]";
    expect_object(vars[i], p);
    allow_keys(vars[i], {"name", "degree", "unit"}, p);
    const std::string name = string_from(require_key(vars[i], "name", p), p + ".name");
    const Rational degree = vars[i].contains("degree") ? rational_from(vars[i]["degree"], p + ".degree") : Rational(0);
    if (vars[i].contains("unit") && !vars[i]["unit"].is_boolean()) schema_error(p + ".unit", "expected a boolean");
    const bool unit = vars[i].value("unit", false);
    if (unit) {
      r.vars.add_unit(name, degree);
    } else {
      r.vars.add(name, degree);
    }
  }
  r.relations = unit_relations(r.vars, r.order);
  if (j.contains("relations")) {
    expect_array(j["relations"], path + ".relations");
    for (std::size_t i = 0; i < j["relations"].size(); ++i)
      r.relations.push_back(r.parse(string_from(j["relations"][i], path + ".relations[" + std::to_string(i) + "]")));
  }
  if (augmentation && j.contains("augmentation")) {
    expect_array(j["augmentation"], path + ".augmentation");
    for (std::size_t i = 0; i < j["augmentation"].size(); ++i)
      augmentation->push_back(
          r.parse(string_from(j["augmentation"][i], path + ".augmentation[" + std::to_string(i) + "]")));
  }
  finalize(r);
  if (!r.qb.finite) throw Error(ErrorCode::InvalidArgument, path + ": base ring is not finite dimensional");
  return r;
}

std::string monomial_text(const Monomial& m, const RingPresentation& r) {
  return to_string(Poly::term(m, Scalar(1), r.order), r.vars);
}

}  // namespace

Json to_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Json(to_i64(v));
  return Json(v.str());
}

Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

Json to_json(const Rational& q) { return Json(to_string(q)); }

Json to_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const Scalar& s) { return Json(s.to_string()); }

Json to_json(const FgAbelianGroup& g) {
  Json out = Json::object();
  out["free_rank"] = g.free_rank();
  out["torsion"] = to_json(IntVector(g.torsion().begin(), g.torsion().end()));
  return out;
}

Json to_json(const Fan& fan) {
  Json out = Json::object();
  Json rays = Json::array();
  for (const auto& r : fan.rays()) rays.push_back(to_json(r));
  out["rays"] = rays;
  Json cones = Json::array();
  for (const auto& c : fan.max_cones()) cones.push_back(Json(c));
  out["max_cones"] = cones;
  return out;
}

Json to_json(const StackyFan& sf) {
  Json out = Json::object();
  out["N"] = to_json(sf.lattice());
  out["fan"] = to_json(sf.fan());
  Json rays = Json::array();
  Json extra = Json::array();
  for (std::size_t i = 0; i < sf.size(); ++i) (i < sf.ray_count() ? rays : extra).push_back(to_json(sf.b(i).coords()));
  out["rays_b"] = rays;
  out["extra_b"] = extra;
  return out;
}

Json to_json(const GroupElement& g) { return to_json(g.coords()); }

Json to_json(const BoxElement& v) {
  Json out = Json::object();
  out["v"] = to_json(v.v);
  out["cone"] = Json(v.sigma);
  out["alphas"] = to_json(v.alphas);
  out["age"] = to_json(v.age());
  return out;
}

Json to_json(const GaleDual& gd) {
  Json out = Json::object();
  out["dg"] = to_json(gd.dg);
  out["beta_vee"] = to_json(gd.beta_vee.matrix());
  out["mapping_cone"] = to_json(gd.mapping_cone);
  return out;
}

Json to_json(const ValidationReport& report) {
  Json out = Json::object();
  out["valid"] = report.ok();
  Json issues = Json::array();
  for (const auto& i : report.issues) {
    Json e = Json::object();
    e["code"] = std::string(error_code_name(i.code));
    if (i.index) e["index"] = *i.index + 1;
    e["message"] = i.message;
    issues.push_back(e);
  }
  out["issues"] = issues;
  return out;
}

Json to_json(const RingPresentation& r) {
  Json out = Json::object();
  Json vars = Json::array();
  for (std::size_t i = 0; i < r.vars.size(); ++i) {
    Json v = Json::object();
    v["name"] = r.vars.name(i);
    v["degree"] = to_json(r.vars[i].degree);
    if (r.vars[i].inverse) v["inverse"] = r.vars.name(*r.vars[i].inverse);
    vars.push_back(v);
  }
  out["variables"] = vars;
  out["base_variables"] = r.base_vars;
  Json rel = Json::array();
  for (const auto& p : r.relations) rel.push_back(to_string(p, r.vars));
  out["relations"] = rel;
  if (r.finalized) {
    Json gb = Json::array();
    for (const auto& p : r.gb.polys) gb.push_back(to_string(p, r.vars));
    out["groebner_basis"] = gb;
    if (r.qb.finite) {
      out["dimension"] = r.qb.dimension();
      Json qb = Json::array();
      for (const auto& m : r.qb.monomials) qb.push_back(monomial_text(m, r));
      out["quotient_basis"] = qb;
    } else {
      out["dimension"] = nullptr;
    }
  }
  return out;
}

Json to_json(const ProductReport& report) {
  Json out = Json::object();
  out["ok"] = report.ok();
  out["products_checked"] = report.products_checked;
  out["mismatches"] = report.mismatches;
  out["global_mismatches"] = report.global_mismatches;
  out["associativity_checked"] = report.associativity_checked;
  out["associativity_failures"] = report.associativity_failures;
  out["global_map_bijective"] = report.global_map_bijective;
  out["failures"] = report.failures;
  return out;
}

Json to_json(const SpectrumReport& report, const KRing& k) {
  Json out = Json::object();
  out["field"] = report.field_order == 1 ? "Q" : "Q(zeta" + std::to_string(report.field_order) + ")";
  out["count"] = report.points.size();
  Json points = Json::array();
  for (const auto& p : report.points) {
    Json e = Json::object();
    e["v"] = to_json(p.v.v);
    e["cone"] = Json(p.v.sigma);
    Json values = Json::object();
    for (std::size_t i = 0; i < p.values.size(); ++i)
      values[k.ring.vars.name(k.ring.base_vars + i)] = to_json(p.values[i]);
    e["values"] = values;
    points.push_back(e);
  }
  out["points"] = points;
  out["relations_checked"] = report.relations_checked;
  out["relation_failures"] = report.relation_failures;
  out["distinct"] = report.distinct;
  return out;
}

Json to_json(const ChernMatrix& m) {
  Json out = Json::object();
  out["field"] = m.field_order == 1 ? "Q" : "Q(zeta" + std::to_string(m.field_order) + ")";
  out["rows"] = m.matrix.size();
  out["cols"] = m.matrix.empty() ? 0 : m.matrix.front().size();
  Json rows = Json::array();
  for (const auto& row : m.matrix) {
    Json r = Json::array();
    for (const auto& s : row) r.push_back(to_json(s));
    rows.push_back(r);
  }
  out["matrix"] = rows;
  out["rank"] = m.rank;
  out["bijective"] = m.bijective;
  return out;
}

Json to_json(const ChernRingReport& report) {
  Json out = Json::object();
  out["ok"] = report.ok();
  out["lambda_identities"] = report.lambda_identities;
  out["lambda_failures"] = report.lambda_failures;
  out["todd_identities"] = report.todd_identities;
  out["todd_failures"] = report.todd_failures;
  out["todd_literal_failures"] = report.todd_literal_failures;
  out["pairs_checked"] = report.pairs_checked;
  out["pair_failures"] = report.pair_failures;
  out["failures"] = report.failures;
  return out;
}

FgAbelianGroup group_from_json(const Json& j) {
  expect_object(j, "N");
  allow_keys(j, {"free_rank", "torsion"}, "N");
  const std::size_t r = index_from(require_key(j, "free_rank", "N"), "N.free_rank");
  IntVector tor;
  if (j.contains("torsion")) tor = int_vector_from(j["torsion"], "N.torsion");
  for (const auto& q : tor)
    if (q < 2) schema_error("N.torsion", "invariant factors must be at least 2");
  for (std::size_t k = 0; k + 1 < tor.size(); ++k)
    if (tor[k + 1] % tor[k] != 0) schema_error("N.torsion", "invariant factors must form a divisibility chain");
  return FgAbelianGroup(r, std::vector<Integer>(tor.begin(), tor.end()));
}

Fan fan_from_json(const Json& j, std::size_t ambient_rank) {
  expect_object(j, "fan");
  allow_keys(j, {"rays", "max_cones"}, "fan");
  const auto& rays = require_key(j, "rays", "fan");
  expect_array(rays, "fan.rays");
  std::vector<IntVector> rv;
  for (std::size_t i = 0; i < rays.size(); ++i)
    rv.push_back(int_vector_from(rays[i], "fan.rays[" + std::to_string(i) + "]", ambient_rank));
  const auto& cones = require_key(j, "max_cones", "fan");
  expect_array(cones, "fan.max_cones");
  std::vector<Cone> cv;
  for (std::size_t c = 0; c < cones.size(); ++c) {
    const std::string p = "fan.max_cones[" + std::to_string(c) + "]";
    expect_array(cones[c], p);
    Cone cone;
    for (std::size_t k = 0; k < cones[c].size(); ++k) {
      const std::size_t i = index_from(cones[c][k], p + "[" + std::to_string(k) + "]");
      if (i >= rv.size()) schema_error(p, "ray index " + std::to_string(i) + " out of range");
      cone.push_back(i);
    }
    cv.push_back(cone);
  }
  return Fan(ambient_rank, rv, cv);
}

StackyFan stacky_fan_from_json(const Json& j) {
  expect_object(j, "document");
  const FgAbelianGroup n = group_from_json(require_key(j, "N", "document"));
  Fan fan = fan_from_json(require_key(j, "fan", "document"), n.free_rank());
  std::vector<GroupElement> b;
  const auto& rays_b = require_key(j, "rays_b", "document");
  expect_array(rays_b, "rays_b");
  if (rays_b.size() != fan.ray_count())
    schema_error("rays_b", "expected one vector per ray (" + std::to_string(fan.ray_count()) + ")");
  for (std::size_t i = 0; i < rays_b.size(); ++i)
    b.emplace_back(n, int_vector_from(rays_b[i], "rays_b[" + std::to_string(i) + "]", n.generators()));
  if (j.contains("extra_b")) {
    expect_array(j["extra_b"], "extra_b");
    for (std::size_t i = 0; i < j["extra_b"].size(); ++i)
      b.emplace_back(n, int_vector_from(j["extra_b"][i], "extra_b[" + std::to_string(i) + "]", n.generators()));
  }
  return StackyFan(n, std::move(fan), std::move(b));
}

BaseRing base_from_name(const std::string& name) {
  if (name == "point") return point_base();
  if (name.rfind("Pn:", 0) == 0) {
    const std::string r = name.substr(3);
    if (!r.empty() && r.find_first_not_of("0123456789") == std::string::npos && r.size() < 4)
      return projective_base(static_cast<unsigned>(std::stoul(r)));
  }
  schema_error("base", "expected \"point\", \"Pn:r\" or an object, found \"" + name + "\"");
}

BaseRing base_from_json(const Json& j) {
  if (j.is_string()) return base_from_name(j.get<std::string>());
  expect_object(j, "base");
  allow_keys(j, {"name", "K", "H", "chern_classes"}, "base");
  BaseRing b;
  b.name = j.contains("name") ? string_from(j["name"], "base.name") : "custom";
  b.k = ring_from_json(require_key(j, "K", "base"), "base.K", &b.k_augmentation);
  b.h = ring_from_json(require_key(j, "H", "base"), "base.H", &b.h_augmentation);
  if (j.contains("chern_classes")) {
    const auto& c = j["chern_classes"];
    expect_array(c, "base.chern_classes");
    if (c.size() != b.k.vars.size())
      schema_error("base.chern_classes", "expected one class per K variable, inverses included");
    std::vector<Poly> classes;
    for (std::size_t i = 0; i < c.size(); ++i)
      classes.push_back(b.h.parse(string_from(c[i], "base.chern_classes[" + std::to_string(i) + "]")));
    b.chern_classes = classes;
  }
  return b;
}

TwistSpec twist_from_json(const Json& j, std::size_t d, const std::optional<BaseRing>& base_override) {
  expect_object(j, "twist");
  allow_keys(j, {"base", "xi", "c1"}, "twist");
  const BaseRing base = base_override ? *base_override
                                      : (j.contains("base") ? base_from_json(j["base"]) : point_base());
  if (!j.contains("xi") && !j.contains("c1")) return trivial_twist(base, d);
  const auto& xi = require_key(j, "xi", "twist");
  const auto& c1 = require_key(j, "c1", "twist");
  expect_array(xi, "twist.xi");
  expect_array(c1, "twist.c1");
  if (xi.size() != d || c1.size() != d)
    schema_error("twist", "xi and c1 need one entry per basis element of M (" + std::to_string(d) + ")");
  TwistSpec t;
  t.base = base;
  for (std::size_t k = 0; k < d; ++k) {
    const Poly x = base.k.reduce(base.k.parse(string_from(xi[k], "twist.xi[" + std::to_string(k) + "]")));
    t.xi.push_back(x);
    t.xi_dual.push_back(invert_in_quotient(base.k, x));
    t.c1.push_back(base.h.reduce(base.h.parse(string_from(c1[k], "twist.c1[" + std::to_string(k) + "]"))));
  }
  t.validate(d);
  return t;
}

Job job_from_json(const Json& j) {
  expect_object(j, "document");
  allow_keys(j, {"name", "N", "fan", "rays_b", "extra_b", "twist"}, "document");
  Job job;
  if (j.contains("name")) job.name = string_from(j["name"], "name");
  job.sf = stacky_fan_from_json(j);
  if (j.contains("twist")) {
    expect_object(j["twist"], "twist");
    job.twist = j["twist"];
  }
  return job;
}

Json job_to_json(const Job& job) {
  Json out = Json::object();
  if (job.name) out["name"] = *job.name;
  out.update(to_json(job.sf));
  if (job.twist) out["twist"] = *job.twist;
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what());
  }
}

TwistSpec job_twist(const Job& job, const std::optional<BaseRing>& base) {
  const std::size_t d = job.sf.rank();
  if (job.twist) return twist_from_json(*job.twist, d, base);
  return trivial_twist(base ? *base : point_base(), d);
}

}  // namespace stacktor

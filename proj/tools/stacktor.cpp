// stacktor: command-line front end for the stacktor library.

#include "stacktor/errors.hpp"
#include "stacktor/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace stacktor;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitSchema = 2;
constexpr int kExitResource = 3;

struct Options {
  std::string input = "-";
  std::string base;
  std::string field = "auto";
  std::string format = "json";
  bool strict_paper = false;
  std::size_t max_pairs = GroebnerOptions{}.max_pairs;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Schema, "cannot read " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

std::optional<BaseRing> base_option(const std::string& arg) {
  if (arg.empty()) return std::nullopt;
  if (arg == "point" || arg.rfind("Pn:", 0) == 0) return base_from_name(arg);
  return base_from_json(parse_json_text(read_input(arg)));
}

// Order of the field requested by --field, or 0 for auto.
unsigned field_option(const std::string& arg) {
  if (arg == "auto") return 0;
  if (arg == "Q") return 1;
  if (arg.rfind("cyclotomic:", 0) == 0) {
    const std::string m = arg.substr(11);
    if (!m.empty() && m.size() < 7 && m.find_first_not_of("0123456789") == std::string::npos && std::stoul(m) > 0)
      return static_cast<unsigned>(std::stoul(m));
  }
  throw Error(ErrorCode::Schema, "--field expects Q, cyclotomic:m or auto");
}

unsigned resolve_field(unsigned needed, const std::string& arg) {
  const unsigned asked = field_option(arg);
  if (asked == 0) return needed;
  if (asked % needed != 0) {
    throw Error(ErrorCode::InvalidArgument, "the values need Q(zeta" + std::to_string(needed) +
                                                "), which is not contained in the requested field");
  }
  return asked;
}

Json header(const Job& job, const std::string& command) {
  Json out = Json::object();
  out["command"] = command;
  if (job.name) out["name"] = *job.name;
  return out;
}

Json run(const std::string& command, const Options& opt, int& exit_code) {
  const Job job = job_from_json(parse_json_text(read_input(opt.input)));
  const StackyFan& sf = job.sf;
  Json out = header(job, command);
  if (command == "validate") {
    const auto report = validate(sf);
    out.update(to_json(report));
    exit_code = report.ok() ? 0 : kExitInvalid;
    return out;
  }
  require_valid(sf);
  const GroebnerOptions gopt{opt.max_pairs};

  if (command == "galedual") {
    out["N"] = to_json(sf.lattice());
    Json beta = Json::object();
    beta["matrix"] = to_json(sf.beta().matrix());
    beta.update(to_json(gale_dual(sf.beta())));
    out["beta"] = beta;
    Json bmin = Json::object();
    bmin["matrix"] = to_json(sf.beta_min().matrix());
    bmin.update(to_json(gale_dual(sf.beta_min())));
    out["beta_min"] = bmin;
    return out;
  }
  if (command == "box") {
    Json list = Json::array();
    for (const auto& v : box_total(sf)) list.push_back(to_json(v));
    out["count"] = list.size();
    out["box"] = list;
    return out;
  }

  const auto base = base_option(opt.base);
  const TwistSpec twist = job_twist(job, base);
  out["base"] = twist.base.name;

  if (command == "sectors") {
    Json list = Json::array();
    std::size_t total = 0;
    for (const auto& s : sectors(sf)) {
      const auto ring = sector_ring(sf, twist, s.v, gopt);
      Json e = to_json(s.v);
      e["shift"] = to_json(ring.shift);
      Json q = Json::object();
      q["N"] = to_json(s.quotient.sf.lattice());
      q["fan"] = to_json(s.quotient.sf.fan());
      Json link = Json::array();
      for (auto j : ring.link_rays) link.push_back(j + 1);
      q["link_rays"] = link;
      e["quotient"] = q;
      e["presentation"] = to_json(ring.ring);
      total += ring.ring.dimension();
      list.push_back(e);
    }
    out["sectors"] = list;
    out["total_dimension"] = total;
    return out;
  }
  if (command == "kring") {
    const auto k = k_ring(sf, twist, gopt);
    out["presentation"] = to_json(k.ring);
    const auto rank = free_rank_over_base(k.ring, twist.base.k, twist.base.k_augmentation, gopt);
    out["rank_over_base"] = rank ? Json(*rank) : Json(nullptr);
    if (sf.extra_count() > 0) {
      const auto full = k_ring_full(sf, twist, k, gopt);
      const auto map = ring_map_check(full.to_minimal, full.full.ring.relations, k.ring.gb, &full.full.ring.gb);
      Json e = Json::object();
      e["presentation"] = to_json(full.full.ring);
      e["map_to_minimal_ok"] = map.ok;
      e["map_to_minimal_bijective"] = map.bijective.value_or(false);
      out["with_extra_data"] = e;
    }
    if (opt.strict_paper) {
      if (sf.ray_count() == 0 && sf.lattice().is_finite()) {
        const auto g = gerbe_presentations(sf.lattice(), twist.base, std::nullopt, gopt);
        Json lit = to_json(g.k_literal);
        lit["note"] = "torsion relations t_j^q_j taken verbatim instead of t_j^q_j - 1";
        out["literal_ideal"] = lit;
      } else {
        out["literal_ideal"] = nullptr;
      }
    }
    return out;
  }
  if (command == "crring") {
    const auto cr = cr_ring(sf, twist, gopt);
    out["global"] = to_json(cr.global);
    Json list = Json::array();
    for (const auto& s : cr.sectors.sectors) {
      Json e = Json::object();
      e["v"] = to_json(s.v.v);
      e["shift"] = to_json(s.shift);
      e["dimension"] = s.ring.dimension();
      Json rel = Json::array();
      for (const auto& p : s.ring.gb.polys) rel.push_back(to_string(p, s.ring.vars));
      e["groebner_basis"] = rel;
      list.push_back(e);
    }
    out["sectors"] = list;
    out["total_dimension"] = cr.sectors.total_dimension;
    const auto rank = free_rank_over_base(cr.global, twist.base.h, twist.base.h_augmentation, gopt);
    out["rank_over_base"] = rank ? Json(*rank) : Json(nullptr);
    if (sf.ray_count() == 0 && sf.lattice().is_finite()) {
      const auto g = gerbe_presentations(sf.lattice(), twist.base, std::nullopt, gopt);
      const auto map = ring_map_check(gerbe_cr_images(cr, g), cr.global.relations, g.cr.gb, &cr.global.gb);
      Json e = to_json(g.cr);
      e["map_from_global_ok"] = map.ok;
      e["map_from_global_bijective"] = map.bijective.value_or(false);
      out["gerbe_form"] = e;
    }
    out["product_check"] = to_json(cr_product_check(sf, cr));
    return out;
  }
  if (command == "spectrum") {
    const auto k = k_ring(sf, twist, gopt);
    auto report = spectrum_points(sf, k);
    report.field_order = resolve_field(report.field_order, opt.field);
    out.update(to_json(report, k));
    return out;
  }
  if (command == "chern") {
    const auto k = k_ring(sf, twist, gopt);
    const auto cr = cr_ring(sf, twist, gopt);
    const ChernContext ctx(sf, twist, k, cr);
    auto m = chern_character(ctx);
    m.field_order = resolve_field(m.field_order, opt.field);
    out["chern_character"] = to_json(m);
    out["ring_check"] = to_json(chern_ring_check(ctx));
    return out;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown command " + command);
}

void render_text(const Json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [](const Json& v) {
    for (const auto& e : v)
      if (e.is_structured() && !(e.is_array() && std::none_of(e.begin(), e.end(), [](const Json& x) {
                                   return x.is_structured();
                                 })))
        return false;
    return true;
  };
  auto inline_array = [&](const Json& v) {
    std::string s = "[";
    bool first = true;
    for (const auto& e : v) {
      if (!first) s += ", ";
      first = false;
      s += e.is_array() ? e.dump() : scalar(e);
    }
    return s + "]";
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      os << pad << it.key() << ":\n";
      render_text(v, os, indent + 1);
    } else if (v.is_array() && flat(v)) {
      os << pad << it.key() << ": " << inline_array(v) << "\n";
    } else if (v.is_array()) {
      os << pad << it.key() << ":\n";
      for (const auto& e : v) {
        if (e.is_object()) {
          os << pad << "  -\n";
          render_text(e, os, indent + 2);
        } else {
          os << pad << "  - " << (e.is_array() ? inline_array(e) : scalar(e)) << "\n";
        }
      }
    } else {
      os << pad << it.key() << ": " << scalar(v) << "\n";
    }
  }
}

void emit(const Json& j, const std::string& format) {
  if (format == "text") {
    render_text(j, std::cout, 0);
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of toric Deligne-Mumford stacks and toric stack bundles"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check the stacky-fan conditions"},
      {"galedual", "Gale duals of beta and beta_min"},
      {"box", "Box elements with their alpha vectors"},
      {"sectors", "twisted sectors and their cohomology presentations"},
      {"kring", "K-theory ring presentation"},
      {"crring", "Chen-Ruan cohomology ring, sectors and product check"},
      {"spectrum", "points of the complexified K-ring over a point"},
      {"chern", "orbifold Chern character matrix and ring checks"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", opt.input, "stacky-fan JSON file, or - for stdin")->default_val("-");
    sub->add_option("--base", opt.base, "point, Pn:r or a base-ring JSON file");
    sub->add_option("--field", opt.field, "Q, cyclotomic:m or auto")->default_val("auto");
    sub->add_option("--format", opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->default_val("json");
    sub->add_flag("--strict-paper", opt.strict_paper, "also report the literal gerbe ideal");
    sub->add_option("--max-pairs", opt.max_pairs, "cap on Groebner S-pairs")->default_val(opt.max_pairs);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSchema;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  int exit_code = 0;
  try {
    const Json out = run(command, opt, exit_code);
    emit(out, opt.format);
    return exit_code;
  } catch (const Error& e) {
    Json err = Json::object();
    err["command"] = command;
    Json body = Json::object();
    body["code"] = std::string(error_code_name(e.code()));
    body["message"] = e.what();
    err["error"] = body;
    emit(err, opt.format);
    std::cerr << "stacktor: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::Schema) return kExitSchema;
    if (e.code() == ErrorCode::ResourceLimit) return kExitResource;
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "stacktor: " << e.what() << "\n";
    return kExitInvalid;
  }
}

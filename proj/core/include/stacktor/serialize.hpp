#pragma once

// JSON forms of groups, fans, stacky fans, twists and presentations.
// Structural problems in input documents raise Error(Schema).

#include "stacktor/presentations.hpp"
#include "stacktor/stringy.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace stacktor {

using Json = nlohmann::ordered_json;

// Integers are written as JSON numbers when they fit in 64 bits, else as strings.
Json to_json(const Integer& v);
Json to_json(const IntVector& v);
Json to_json(const IntMatrix& m);  // list of rows
Json to_json(const Rational& q);   // "p/q" string
Json to_json(const RatVector& v);
Json to_json(const Scalar& s);     // text such as "-1/2 + zeta3^2"

Json to_json(const FgAbelianGroup& g);
Json to_json(const Fan& fan);
Json to_json(const StackyFan& sf);
Json to_json(const GroupElement& g);
Json to_json(const BoxElement& v);
Json to_json(const GaleDual& gd);
Json to_json(const ValidationReport& report);
Json to_json(const RingPresentation& r);
Json to_json(const ProductReport& report);
Json to_json(const SpectrumReport& report, const KRing& k);
Json to_json(const ChernMatrix& m);
Json to_json(const ChernRingReport& report);

FgAbelianGroup group_from_json(const Json& j);
Fan fan_from_json(const Json& j, std::size_t ambient_rank);
StackyFan stacky_fan_from_json(const Json& j);

// "point" or "Pn:r".
BaseRing base_from_name(const std::string& name);
// {"K": ring, "H": ring, "chern_classes": [...]} with
// ring = {"variables": [{"name", "degree", "unit"}], "relations": [...], "augmentation": [...]}.
BaseRing base_from_json(const Json& j);

// {"base": ..., "xi": [...], "c1": [...]}; xi are K classes, c1 are H classes.
// `base_override` replaces the document's base when given.
TwistSpec twist_from_json(const Json& j, std::size_t d, const std::optional<BaseRing>& base_override = std::nullopt);

// A job document: the stacky fan keys plus optional "name" and "twist".
struct Job {
  std::optional<std::string> name;
  StackyFan sf;
  std::optional<Json> twist;  // kept verbatim for round trips
};

Job job_from_json(const Json& j);
Json job_to_json(const Job& job);
// Parses text, raising Error(Schema) on malformed JSON.
Json parse_json_text(const std::string& text);

// The twist of a job: the document's twist, a trivial twist over `base`, or a
// trivial twist over a point.
TwistSpec job_twist(const Job& job, const std::optional<BaseRing>& base);

}  // namespace stacktor

#pragma once

// Stacky fans shared by the tests.

#include "stacktor/serialize.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using namespace stacktor;

inline StackyFan make(std::size_t d, std::vector<IntVector> rays, std::vector<Cone> cones, std::vector<IntVector> b = {}) {
  const auto n = FgAbelianGroup::free(d);
  if (b.empty()) b = rays;
  std::vector<GroupElement> bs;
  for (auto& x : b) bs.emplace_back(n, x);
  for (auto& r : rays) r = primitive(r);
  return StackyFan(n, Fan(d, rays, cones), bs);
}

inline StackyFan p1() { return make(1, {{1}, {-1}}, {{0}, {1}}); }
inline StackyFan p2() { return make(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }
inline StackyFan weighted(long a, long b) { return make(1, {{1}, {-1}}, {{0}, {1}}, {{a}, {-b}}); }
inline StackyFan p112() { return make(2, {{1, 0}, {0, 1}, {-1, -2}}, {{0, 1}, {1, 2}, {0, 2}}); }
inline StackyFan bmu(long q) { return StackyFan(FgAbelianGroup(0, {Integer(q)}), Fan(0, {}, {}), {}); }

// The fixed suite over a point, with the expected K-theory dimensions.
struct Case {
  std::string name;
  StackyFan sf;
  std::size_t dimension;
};

inline std::vector<Case> suite() {
  return {{"P1", p1(), 2},           {"P2", p2(), 3},       {"P(1,2)", weighted(1, 2), 3},
          {"P(1,3)", weighted(1, 3), 4}, {"P(1,1,2)", p112(), 4}, {"Bmu2", bmu(2), 2},
          {"Bmu3", bmu(3), 3}};
}

inline TwistSpec over_point(const StackyFan& sf) { return trivial_twist(point_base(), sf.rank()); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string corpus_path(const std::string& file) { return std::string(STACKTOR_CORPUS_DIR) + "/" + file; }

inline Job corpus_job(const std::string& file) { return job_from_json(parse_json_text(read_file(corpus_path(file)))); }

}  // namespace fixtures

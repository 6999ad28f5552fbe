#include "stacktor/stringy.hpp"

#include <benchmark/benchmark.h>

using namespace stacktor;

namespace {

// Fan of P2 with b_1 = c e1, b_2 = c e2, b_3 = -e1 - e2.
StackyFan stacky_plane(long c) {
  const auto n = FgAbelianGroup::free(2);
  const std::vector<IntVector> rays{{c, 0}, {0, c}, {-1, -1}};
  std::vector<GroupElement> bs;
  std::vector<IntVector> prim;
  for (const auto& r : rays) {
    bs.emplace_back(n, r);
    prim.push_back(primitive(r));
  }
  return StackyFan(n, Fan(2, prim, {{0, 1}, {1, 2}, {0, 2}}), bs);
}

StackyFan weighted_line(long a, long b) {
  const auto n = FgAbelianGroup::free(1);
  return StackyFan(n, Fan(1, {{1}, {-1}}, {{0}, {1}}), {GroupElement(n, {a}), GroupElement(n, {-b})});
}

void BM_Groebner(benchmark::State& state) {
  VarTable v;
  v.add("x");
  v.add("y");
  v.add("z");
  const std::vector<Poly> gens{parse_poly("x^3 - y*z - 1", v), parse_poly("y^3 - x*z + 2", v),
                               parse_poly("z^3 - x*y - 3", v)};
  for (auto _ : state) benchmark::DoNotOptimize(groebner(gens, 3));
}
BENCHMARK(BM_Groebner)->Unit(benchmark::kMillisecond);

void BM_KRingWeightedLine(benchmark::State& state) {
  const auto sf = weighted_line(1, state.range(0));
  const auto tw = trivial_twist(point_base(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(k_ring(sf, tw));
}
BENCHMARK(BM_KRingWeightedLine)->Arg(2)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_KRingStackyPlane(benchmark::State& state) {
  const auto sf = stacky_plane(2);
  const auto tw = trivial_twist(point_base(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(k_ring(sf, tw));
}
BENCHMARK(BM_KRingStackyPlane)->Unit(benchmark::kMillisecond);

void BM_CrRingBundle(benchmark::State& state) {
  const auto sf = weighted_line(1, 3);
  const auto tw = projective_twist(1, {2});
  for (auto _ : state) benchmark::DoNotOptimize(cr_ring(sf, tw));
}
BENCHMARK(BM_CrRingBundle)->Unit(benchmark::kMillisecond);

void BM_ProductCheck(benchmark::State& state) {
  const auto sf = weighted_line(1, state.range(0));
  const auto cr = cr_ring(sf, trivial_twist(point_base(), 1));
  for (auto _ : state) benchmark::DoNotOptimize(cr_product_check(sf, cr));
}
BENCHMARK(BM_ProductCheck)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ChernRingCheck(benchmark::State& state) {
  const auto sf = weighted_line(1, 3);
  const auto tw = trivial_twist(point_base(), 1);
  const auto k = k_ring(sf, tw);
  const auto cr = cr_ring(sf, tw);
  for (auto _ : state) benchmark::DoNotOptimize(chern_ring_check(ChernContext(sf, tw, k, cr)));
}
BENCHMARK(BM_ChernRingCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

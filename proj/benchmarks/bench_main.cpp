#include <benchmark/benchmark.h>

#include "porset/construction.hpp"
#include "porset/oracle.hpp"
#include "porset/sampling.hpp"

using namespace porset;

namespace {

const DirectionSchedule kGeneric({0.1, 0.37, 0.61, 0.83});

const LevelSet& depth3() {
    static const LevelSet ls = build_up_to(3, Window{{0, 0}, 0x1p-8, kDefaultPad}, kGeneric);
    return ls;
}

std::vector<Point> queries(const LevelSet& ls, std::size_t count) {
    SampleStream rng(99);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.in_box(ls.window().core()));
    return pts;
}

void BM_BuildLevel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Window w{{0, 0}, n <= 2 ? 1.0 / 32 : 0x1p-8, kDefaultPad};
    const LevelSet prev = build_up_to(n - 1, w, kGeneric);
    for (auto _ : state) {
        const LevelSet next = build_level(prev, n);
        benchmark::DoNotOptimize(next.capsule_count());
    }
}
BENCHMARK(BM_BuildLevel)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DistIndexed(benchmark::State& state) {
    const LevelSet& ls = depth3();
    const auto pts = queries(ls, 1024);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ls.nearest(3, pts[i++ % pts.size()]).signed_distance);
}
BENCHMARK(BM_DistIndexed);

void BM_DistExhaustive(benchmark::State& state) {
    const LevelSet& ls = depth3();
    const auto pts = queries(ls, 1024);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ls.nearest_exhaustive(3, pts[i++ % pts.size()]).signed_distance);
}
BENCHMARK(BM_DistExhaustive)->Unit(benchmark::kMicrosecond);

void BM_OracleMembership(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const LevelSet& ls = depth3();
    const BruteOracle oracle(kGeneric);
    const auto pts = queries(ls, 1024);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(oracle.membership(pts[i++ % pts.size()], n));
}
BENCHMARK(BM_OracleMembership)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

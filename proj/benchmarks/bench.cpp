#include <benchmark/benchmark.h>

#include <cmath>

#include "symext/encoder.hpp"
#include "symext/gluing.hpp"

using namespace symext;

namespace {

FiniteSubset interval(Coord lo, Coord len) {
    std::vector<GroupElement> e;
    for (Coord i = 0; i < len; ++i) e.push_back(GroupElement(GroupKind::Z, {lo + i}));
    return FiniteSubset(GroupKind::Z, std::move(e));
}

const AdmissibilityConfig kExact(GroupKind::Z, AdmissibilityMode::exact1d);

EncoderConfig no00_config() {
    return {2, 1.5, interval(0, 2), std::log2(2 + 2 * std::sqrt(2.0)), box_tiling(GroupKind::Z, {8}), kExact};
}

}  // namespace

static void BM_CountGoldenInterval(benchmark::State& state) {
    const auto spec = golden_mean_shift();
    const auto t = interval(0, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_patterns(spec, t, kExact));
}
BENCHMARK(BM_CountGoldenInterval)->Arg(16)->Arg(64)->Arg(256);

static void BM_CountFullShiftZ2(benchmark::State& state) {
    const auto spec = full_shift(GroupKind::Z2, 3);
    const auto f = folner_set(GroupKind::Z2, static_cast<int>(state.range(0)));
    const AdmissibilityConfig cfg(GroupKind::Z2);
    for (auto _ : state) benchmark::DoNotOptimize(count_patterns(spec, f, cfg));
}
BENCHMARK(BM_CountFullShiftZ2)->Arg(4)->Arg(8);

static void BM_BuildPhi(benchmark::State& state) {
    const auto spec = forbid_words(Alphabet::digits(5), {"00"});
    const auto cfg = no00_config();
    for (auto _ : state) benchmark::DoNotOptimize(build_phi(cfg, spec));
}
BENCHMARK(BM_BuildPhi);

static void BM_PreimageTwoTiles(benchmark::State& state) {
    const auto table = build_phi(no00_config(), forbid_words(Alphabet::digits(5), {"00"}));
    const auto& tiling = table.config().tiling;
    const std::vector<TileInstance> tiles{tile_containing(tiling, GroupElement(GroupKind::Z, {0})),
                                          tile_containing(tiling, GroupElement(GroupKind::Z, {8}))};
    std::vector<Symbol> word(16);
    for (std::size_t i = 0; i < word.size(); ++i) word[i] = static_cast<Symbol>((i * 7 / 3) % 2);
    const Pattern y(interval(0, 16), word);
    for (auto _ : state) benchmark::DoNotOptimize(preimage(table, y, tiles));
}
BENCHMARK(BM_PreimageTwoTiles);

static void BM_GluingCheck(benchmark::State& state) {
    const auto spec = golden_mean_shift();
    const auto w = interval(0, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(check_gluing_property(spec, interval(0, 2), w, {}, kExact));
}
BENCHMARK(BM_GluingCheck)->Arg(6)->Arg(8);

BENCHMARK_MAIN();

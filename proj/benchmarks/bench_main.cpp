#include <benchmark/benchmark.h>

#include "fraisse/amalgamation.hpp"
#include "fraisse/endo.hpp"
#include "fraisse/search.hpp"
#include "fraisse/topology.hpp"

using namespace fraisse;

namespace {

Structure cycle(int n) {
    Structure s(Signature({{"E", 2}}), n);
    for (int i = 0; i < n; ++i) {
        s.add(0, {i, (i + 1) % n});
        s.add(0, {(i + 1) % n, i});
    }
    return s;
}

void BM_FindHoms_CycleToCycle(benchmark::State& state) {
    auto a = cycle(static_cast<int>(state.range(0)));
    auto b = cycle(5);
    for (auto _ : state) benchmark::DoNotOptimize(find_morphisms(a, b, MorphismKind::hom));
}
BENCHMARK(BM_FindHoms_CycleToCycle)->Arg(5)->Arg(10)->Arg(15);

void BM_CanonicalForm_Poset(benchmark::State& state) {
    auto members = enumerate(*builtin_age("posets"), static_cast<int>(state.range(0)));
    for (auto _ : state)
        for (const auto& m : members) benchmark::DoNotOptimize(canonical_form(m));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(members.size()));
}
BENCHMARK(BM_CanonicalForm_Poset)->Arg(3)->Arg(4);

void BM_Enumerate(benchmark::State& state, const char* age) {
    auto spec = *builtin_age(age);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate(spec, static_cast<int>(state.range(0))));
}
BENCHMARK_CAPTURE(BM_Enumerate, graphs, "graphs")->Arg(3)->Arg(4)->Arg(5);
BENCHMARK_CAPTURE(BM_Enumerate, posets, "posets")->Arg(3)->Arg(4);

void BM_CheckProperty(benchmark::State& state, const char* age, Property p) {
    auto spec = *builtin_age(age);
    CheckOptions opts;
    opts.size_bound = static_cast<int>(state.range(0));
    opts.keep_records = false;
    for (auto _ : state) benchmark::DoNotOptimize(check_property(p, spec, opts));
}
BENCHMARK_CAPTURE(BM_CheckProperty, graphs_AP, "graphs", Property::AP)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CheckProperty, posets_HAP, "posets", Property::HAP)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CheckProperty, graphs_strictAP, "graphs", Property::strictAP)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_BuildTower(benchmark::State& state, const char* age) {
    auto spec = *builtin_age(age);
    for (auto _ : state) benchmark::DoNotOptimize(build_tower(spec, 2, static_cast<int>(state.range(0))));
}
BENCHMARK_CAPTURE(BM_BuildTower, graphs, "graphs")->Arg(2)->Arg(3);
BENCHMARK_CAPTURE(BM_BuildTower, linear, "nonstrict-linear")->Arg(3)->Arg(4);

void BM_UniversalEndo_Linear(benchmark::State& state) {
    auto tower = build_tower(*builtin_age("nonstrict-linear"), 2, 3);
    for (auto _ : state) benchmark::DoNotOptimize(build_universal_endo(tower, 2, 2));
}
BENCHMARK(BM_UniversalEndo_Linear)->Unit(benchmark::kMillisecond);

void BM_MetricLaws(benchmark::State& state) {
    auto n = static_cast<int>(state.range(0));
    auto ctx = UltrametricContext::identity(n);
    auto maps = full_transformation_monoid(n);
    for (auto _ : state) benchmark::DoNotOptimize(check_metric_laws(ctx, maps));
}
BENCHMARK(BM_MetricLaws)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_WeakOrbits_FullMonoid(benchmark::State& state) {
    auto n = static_cast<int>(state.range(0));
    auto maps = full_transformation_monoid(n);
    for (auto _ : state) benchmark::DoNotOptimize(weak_orbits(n, maps));
}
BENCHMARK(BM_WeakOrbits_FullMonoid)->Arg(3)->Arg(4)->Arg(5);

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"
#include "supertau/virasoro.hpp"

using namespace supertau;

namespace {

std::shared_ptr<FrobeniusCover> cp1() {
    return std::make_shared<FrobeniusCover>(std::make_shared<FrobeniusSpec>(load_spec(builtin_spec_json("cp1"))));
}

// Fresh covers in every iteration, so the memo tables start empty.

void BM_GelfandDickey(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        KdvCover k;
        benchmark::DoNotOptimize(k.R(n));
    }
}
BENCHMARK(BM_GelfandDickey)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Cp1Densities(benchmark::State& state) {
    int p = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto c = cp1();
        benchmark::DoNotOptimize(c->h(2, p));
    }
}
BENCHMARK(BM_Cp1Densities)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_Commutativity(benchmark::State& state) {
    int b = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto c = cp1();
        benchmark::DoNotOptimize(check_commutativity(*c, b, b));
    }
}
BENCHMARK(BM_Commutativity)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_GeneratingIdentities(benchmark::State& state) {
    int w = static_cast<int>(state.range(0));
    for (auto _ : state) {
        KdvCover k;
        benchmark::DoNotOptimize(k.check_generating_identities(w));
    }
}
BENCHMARK(BM_GeneratingIdentities)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_VirasoroAlgebra(benchmark::State& state) {
    int t = static_cast<int>(state.range(0));
    auto table = [](int m) { return kdv_coefficients(m, true); };
    for (auto _ : state) benchmark::DoNotOptimize(check_virasoro_algebra(table, {-1, 0, 1, 2}, 1, t, t));
}
BENCHMARK(BM_VirasoroAlgebra)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_VirasoroSymmetry(benchmark::State& state) {
    int b = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto c = cp1();
        std::map<int, std::unique_ptr<VirasoroFlow>> own;
        std::map<int, const VirasoroFlow*> flows;
        for (int m : {-1, 0, 1}) {
            own[m] = std::make_unique<VirasoroFlow>(*c, general_coefficients(*c, m), 4, 4);
            flows[m] = own[m].get();
        }
        benchmark::DoNotOptimize(check_symmetry_commutation(*c, flows, {-1, 0, 1}, {b, b}));
    }
}
BENCHMARK(BM_VirasoroSymmetry)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

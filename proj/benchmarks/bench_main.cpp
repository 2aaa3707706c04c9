#include <benchmark/benchmark.h>

#include "lnagell/large_y.hpp"
#include "lnagell/local_count.hpp"
#include "lnagell/modular.hpp"
#include "lnagell/numerics.hpp"
#include "lnagell/small_y.hpp"
#include "lnagell/thue.hpp"

using namespace lnagell;

namespace {

const CurveSet& curves() {
    static const CurveSet set = load_curves(LNAGELL_ASSET_DIR "/curves_128.json");
    return set;
}

void BM_Modpow(benchmark::State& state) {
    u64 acc = 0;
    for (auto _ : state) acc += modpow(3, 1'000'000'006, 1'000'000'007);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Modpow);

void BM_DiscreteLog(benchmark::State& state) {
    const u64 l = static_cast<u64>(state.range(0));
    const u64 g = primitive_root(l);
    const u64 x = modpow(g, l / 3, l);
    for (auto _ : state) benchmark::DoNotOptimize(discrete_log(g, x, l));
}
BENCHMARK(BM_DiscreteLog)->Arg(10007)->Arg(1000003);

void BM_ThueEval(benchmark::State& state) {
    const auto f = thue_coeffs(static_cast<unsigned long>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(thue_eval(f, 123456, -98765));
}
BENCHMARK(BM_ThueEval)->Arg(17)->Arg(101);

void BM_ApPointCount(benchmark::State& state) {
    const auto& F = curves().curves[curves().minimal];
    const u64 l = static_cast<u64>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ap_point_count(F, l));
}
BENCHMARK(BM_ApPointCount)->Arg(1033)->Arg(100043);

void BM_ResidueSet(benchmark::State& state) {
    const auto& F = curves().curves[curves().minimal];
    for (auto _ : state) benchmark::DoNotOptimize(residue_set(17, 103, F));
}
BENCHMARK(BM_ResidueSet);

void BM_GenerateCertificate(benchmark::State& state) {
    const auto& F = curves().curves[curves().minimal];
    CertificateOptions opt;
    opt.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(generate_certificate(17, F, opt));
}
BENCHMARK(BM_GenerateCertificate)->Unit(benchmark::kMillisecond);

void BM_ContinuedFraction(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(contfrac_theta(17, 200, 2048));
}
BENCHMARK(BM_ContinuedFraction)->Unit(benchmark::kMillisecond);

void BM_LocalCountBruteForce(benchmark::State& state) {
    const u64 n = static_cast<u64>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_count(7, n));
}
BENCHMARK(BM_LocalCountBruteForce)->Arg(211)->Arg(1999)->Unit(benchmark::kMillisecond);

void BM_LargeYConstants(benchmark::State& state) {
    const auto rows = load_table(LNAGELL_ASSET_DIR "/large_y_table.csv");
    for (auto _ : state) benchmark::DoNotOptimize(verify_table_row(rows[0], 919));
}
BENCHMARK(BM_LargeYConstants)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "selfcorrect/field.hpp"
#include "selfcorrect/verify.hpp"

using namespace selfcorrect;

namespace {

void BM_MatMul(benchmark::State& state) {
    PrimeField ctx(2147483647);
    Rng rng = make_rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    FieldMat a = random_mat(ctx, n, n, rng);
    FieldMat b = random_mat(ctx, n, n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(mat_mul(ctx, a, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MatMul)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oNCubed);

void BM_Freivalds(benchmark::State& state) {
    PrimeField ctx(257);
    Rng rng = make_rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    FieldMat a = random_mat(ctx, n, n, rng);
    FieldMat b = random_mat(ctx, n, n, rng);
    FieldMat c = mat_mul(ctx, a, b);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify::freivalds_verify(ctx, a, b, c, 20, rng));
}
BENCHMARK(BM_Freivalds)->RangeMultiplier(2)->Range(8, 64);

void BM_Rref(benchmark::State& state) {
    PrimeField ctx(65537);
    Rng rng = make_rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<FieldVec> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(random_vec(ctx, 2 * n, rng));
    for (auto _ : state) benchmark::DoNotOptimize(rref_with_pivots(ctx, rows));
}
BENCHMARK(BM_Rref)->RangeMultiplier(2)->Range(8, 64);

void BM_MeasureBiasExhaustive(benchmark::State& state) {
    PrimeField ctx(2);
    Rng rng = make_rng(4);
    const auto n = static_cast<std::size_t>(state.range(0));
    auto s = verify::generate_small_bias_set(n, ctx, verify::kDefaultBiasConstant, rng);
    for (auto _ : state) benchmark::DoNotOptimize(verify::measure_bias(s, ctx));
}
BENCHMARK(BM_MeasureBiasExhaustive)->DenseRange(8, 14, 2);

} // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/fourier.hpp"
#include "selfcorrect/mm_boost.hpp"
#include "selfcorrect/planted.hpp"

using namespace selfcorrect;

namespace {

void BM_ExactSpectrum(benchmark::State& state) {
    PrimeField ctx(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng = make_rng(5);
    auto x = planted::PlantedGoodSet::random_coset_union(ctx, n, 2, 1, rng);
    VectorDomain dom(ctx, n);
    auto ind = x.indicator();
    for (auto _ : state)
        benchmark::DoNotOptimize(fourier::compute_spectrum_exact(ind, dom, std::pow(0.25, 1.5)));
}
BENCHMARK(BM_ExactSpectrum)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_SparseShift(benchmark::State& state) {
    PrimeField ctx(2);
    const std::size_t n = 64;
    Rng rng = make_rng(6);
    std::vector<FieldVec> constraints;
    for (int i = 0; i < 4; ++i) constraints.push_back(random_vec(ctx, n, rng));
    auto basis = fourier::build_correction_basis(ctx, constraints, 0.25);
    FieldVec y = random_vec(ctx, n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(fourier::sparse_shift(ctx, y, basis));
}
BENCHMARK(BM_SparseShift);

void BM_DecompositionSample(benchmark::State& state) {
    PrimeField ctx(2);
    const std::size_t n = 12;
    Rng rng = make_rng(7);
    auto x = planted::PlantedGoodSet::random_coset_union(ctx, n, 2, 1, rng);
    VectorDomain dom(ctx, n);
    auto basis = fourier::build_correction_basis(
        ctx, fourier::compute_spectrum_exact(x.indicator(), dom, std::pow(0.25, 1.5)));
    auto oracle = x.membership_oracle();
    FieldVec y = random_vec(ctx, n, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(fourier::sample_decomposition(ctx, y, basis, oracle, 4096, rng));
}
BENCHMARK(BM_DecompositionSample)->Unit(benchmark::kMicrosecond);

void BM_LowRankMultiply(benchmark::State& state) {
    PrimeField ctx(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng = make_rng(8);
    auto shift = mm::sample_low_rank_shift(ctx, n, 4, rng);
    FieldMat a = random_mat(ctx, n, n, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(mm::multiply_with_rank_decomposition(ctx, a, shift));
}
BENCHMARK(BM_LowRankMultiply)->RangeMultiplier(2)->Range(16, 128);

void BM_DenseMultiplySameShape(benchmark::State& state) {
    PrimeField ctx(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng = make_rng(9);
    auto shift = mm::sample_low_rank_shift(ctx, n, 4, rng);
    FieldMat dense = shift.dense(ctx);
    FieldMat a = random_mat(ctx, n, n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(mat_mul(ctx, a, dense));
}
BENCHMARK(BM_DenseMultiplySameShape)->RangeMultiplier(2)->Range(16, 128);

} // namespace

BENCHMARK_MAIN();

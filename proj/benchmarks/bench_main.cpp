#include "rstark/verify.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace rstark;

namespace {

IntMatrix random_int_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> d(-20, 20);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(gen);
    return m;
}

void BM_HermiteForm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    IntMatrix m = random_int_matrix(n + 2, n, 42);
    for (auto _ : state) benchmark::DoNotOptimize(hermite_form(m));
}
BENCHMARK(BM_HermiteForm)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_SmithForm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    IntMatrix m = random_int_matrix(n, n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(smith_form(m));
}
BENCHMARK(BM_SmithForm)->Arg(4)->Arg(8)->Arg(16);

void BM_LDerivative(benchmark::State& state) {
    PrecisionContext ctx(static_cast<unsigned>(state.range(0)));
    ScopedPrecision guard(ctx);
    auto chi = *quadratic_character(5);
    for (auto _ : state) benchmark::DoNotOptimize(l_derivative_at_0(chi, ctx));
}
BENCHMARK(BM_LDerivative)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RubinIndex(benchmark::State& state) {
    FiniteAbelianGroup g({2, 2});
    GModuleLattice m = GModuleLattice::regular(g, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rubin_vs_wedge_index(m, 1, group_ring_one(g)));
}
BENCHMARK(BM_RubinIndex)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_VerifyQSqrt5(benchmark::State& state) {
    PrecisionContext ctx(static_cast<unsigned>(state.range(0)));
    FieldInstance fi = load_field_instance(std::string(RSTARK_DATA_DIR) + "/q-sqrt5.json", ctx);
    for (auto _ : state) benchmark::DoNotOptimize(verify_instance(fi));
}
BENCHMARK(BM_VerifyQSqrt5)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

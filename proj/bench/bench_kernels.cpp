// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wbd/kernels.hpp"
#include "wbd/spectral.hpp"

using wbd::kernels::cplx;

namespace {

std::vector<cplx> data(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(normal(rng), normal(rng));
    return v;
}

template <void (*Product)(std::span<const cplx>, std::span<const cplx>, std::span<cplx>)>
void BM_product(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = data(n, 1), b = data(n, 2);
    std::vector<cplx> out(n);
    for (auto _ : state) {
        Product(a, b, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <double (*Sum)(std::span<const cplx>, double)>
void BM_sum_abs_pow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = data(n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(Sum(a, 3.0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <void (*Scale)(std::span<cplx>, std::span<const double>)>
void BM_scale(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto a = data(n, 4);
    std::vector<double> f(n, 1.0);
    for (auto _ : state) {
        Scale(a, f);
        benchmark::DoNotOptimize(a.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_propagate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const wbd::GridSpec g(2, n, 20.0);
    wbd::SpectralField f(g);
    const auto src = data(g.size(), 5);
    std::copy(src.begin(), src.end(), f.coeffs().begin());
    for (auto _ : state) benchmark::DoNotOptimize(wbd::propagate(f, wbd::SymbolParams(0), wbd::Sign::plus, 1.0));
}

}  // namespace

BENCHMARK(BM_product<wbd::kernels::serial::product>)->Name("product/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_product<wbd::kernels::omp::product>)->Name("product/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_sum_abs_pow<wbd::kernels::serial::sum_abs_pow>)->Name("sum_abs_pow/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_sum_abs_pow<wbd::kernels::omp::sum_abs_pow>)->Name("sum_abs_pow/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_scale<wbd::kernels::serial::scale>)->Name("scale/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_scale<wbd::kernels::omp::scale>)->Name("scale/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_propagate)->Arg(64)->Arg(256);

BENCHMARK_MAIN();

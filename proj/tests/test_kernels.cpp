#include "doctest.h"

#include <random>

#include "wbd/kernels.hpp"

using namespace wbd;
using kernels::cplx;

namespace {

std::vector<cplx> gaussian_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(normal(rng), normal(rng));
    return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("serial and OpenMP versions agree bit for bit") {
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{4095}, std::size_t{4097}, std::size_t{70001}}) {
        const auto a = gaussian_vector(n, 1);
        const auto b = gaussian_vector(n, 2);
        std::vector<double> real(n);
        for (std::size_t i = 0; i < n; ++i) real[i] = a[i].real();

        for (int workers : {1, 3}) {
            kernels::set_workers(workers);
            auto s = a, o = a;
            kernels::serial::scale(s, real);
            kernels::omp::scale(o, real);
            CHECK(s == o);
            kernels::serial::scale(s, b);
            kernels::omp::scale(o, b);
            CHECK(s == o);
            std::vector<cplx> ps(n), po(n);
            kernels::serial::product(a, b, ps);
            kernels::omp::product(a, b, po);
            CHECK(ps == po);
            for (double p : {1.0, 2.0, 3.5, 4.0})
                CHECK(kernels::serial::sum_abs_pow(a, p) == kernels::omp::sum_abs_pow(a, p));
            CHECK(kernels::serial::max_abs(a) == kernels::omp::max_abs(a));
        }
    }
    kernels::set_workers(0);
}

TEST_CASE("reductions match a direct sum") {
    const auto a = gaussian_vector(10000, 3);
    double two = 0.0, four = 0.0, mx = 0.0;
    for (const auto& z : a) {
        two += std::norm(z);
        four += std::norm(z) * std::norm(z);
        mx = std::max(mx, std::abs(z));
    }
    CHECK(kernels::omp::sum_abs_pow(a, 2.0) == doctest::Approx(two).epsilon(1e-13));
    CHECK(kernels::omp::sum_abs_pow(a, 4.0) == doctest::Approx(four).epsilon(1e-13));
    CHECK(kernels::omp::max_abs(a) == mx);
}

TEST_CASE("map_parallel preserves order and rethrows the first error") {
    const auto out = kernels::map_parallel(100, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
    CHECK(kernels::map_serial(5, [](std::size_t i) { return i + 1; }) == std::vector<std::size_t>{1, 2, 3, 4, 5});
    try {
        kernels::map_parallel(50, [](std::size_t i) -> int {
            if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
            return 0;
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "7");
    }
}

}

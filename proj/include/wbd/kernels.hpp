#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version
// and an OpenMP version with identical results: reductions accumulate over
// fixed-size blocks and combine the block sums in index order, so the
// output does not depend on the thread count.

#include <complex>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <vector>

namespace wbd::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kReduceBlock = 4096;

namespace serial {
void scale(std::span<cplx> data, std::span<const double> factor);
void scale(std::span<cplx> data, std::span<const cplx> factor);
void product(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
double sum_abs_pow(std::span<const cplx> data, double p);
double max_abs(std::span<const cplx> data);
}  // namespace serial

namespace omp {
void scale(std::span<cplx> data, std::span<const double> factor);
void scale(std::span<cplx> data, std::span<const cplx> factor);
void product(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
double sum_abs_pow(std::span<const cplx> data, double p);
double max_abs(std::span<const cplx> data);
}  // namespace omp

// Library code calls the OpenMP versions.
using omp::max_abs;
using omp::product;
using omp::scale;
using omp::sum_abs_pow;

/// Sets the OpenMP thread count (<= 0 leaves the runtime default).
void set_workers(int workers);
int workers();

/// out[i] = f(i), evaluated serially.
template <class F>
auto map_serial(std::size_t n, F&& f) {
    std::vector<decltype(f(std::size_t{0}))> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
}

/// out[i] = f(i), evaluated across the OpenMP pool. The first exception
/// (lowest index) is rethrown after the loop.
template <class F>
auto map_parallel(std::size_t n, F&& f) {
    using T = decltype(f(std::size_t{0}));
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            slots[static_cast<std::size_t>(i)].emplace(f(static_cast<std::size_t>(i)));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace wbd::kernels

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wbd/kernels.hpp"

namespace wbd::kernels {

namespace omp {

void scale(std::span<cplx> data, std::span<const double> factor) {
    const long long n = static_cast<long long>(data.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) data[i] *= factor[i];
}

void scale(std::span<cplx> data, std::span<const cplx> factor) {
    const long long n = static_cast<long long>(data.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) data[i] *= factor[i];
}

void product(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    const long long n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_abs_pow(std::span<const cplx> data, double p) {
    const std::size_t n = data.size();
    const long long blocks = static_cast<long long>((n + kReduceBlock - 1) / kReduceBlock);
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < blocks; ++b) {
        const std::size_t start = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t stop = std::min(n, start + kReduceBlock);
        double block = 0.0;
        if (p == 2.0) {
            for (std::size_t i = start; i < stop; ++i) block += std::norm(data[i]);
        } else if (p == 4.0) {
            for (std::size_t i = start; i < stop; ++i) {
                const double e = std::norm(data[i]);
                block += e * e;
            }
        } else {
            for (std::size_t i = start; i < stop; ++i) block += std::pow(std::abs(data[i]), p);
        }
        partial[static_cast<std::size_t>(b)] = block;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double max_abs(std::span<const cplx> data) {
    const long long n = static_cast<long long>(data.size());
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long long i = 0; i < n; ++i) m = std::max(m, std::abs(data[i]));
    return m;
}

}  // namespace omp

void set_workers(int workers) {
    if (workers > 0) omp_set_num_threads(workers);
}

int workers() { return omp_get_max_threads(); }

}  // namespace wbd::kernels

#include <algorithm>
#include <cmath>

#include "wbd/kernels.hpp"

namespace wbd::kernels::serial {

void scale(std::span<cplx> data, std::span<const double> factor) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factor[i];
}

void scale(std::span<cplx> data, std::span<const cplx> factor) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factor[i];
}

void product(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

double sum_abs_pow(std::span<const cplx> data, double p) {
    double total = 0.0;
    for (std::size_t start = 0; start < data.size(); start += kReduceBlock) {
        const std::size_t stop = std::min(data.size(), start + kReduceBlock);
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
        total += block;
    }
    return total;
}

double max_abs(std::span<const cplx> data) {
    double m = 0.0;
    for (const auto& z : data) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace wbd::kernels::serial

#pragma once

// Truncated Taylor-series arithmetic on fixed-length coefficient arrays.

#include <array>
#include <cmath>
#include <cstddef>

namespace wbd::taylor {

template <std::size_t N>
using Series = std::array<double, N>;

template <std::size_t N>
Series<N> mul(const Series<N>& a, const Series<N>& b) {
    Series<N> c{};
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k <= n; ++k) c[n] += a[k] * b[n - k];
    return c;
}

/// s with s*s = a; requires a[0] > 0.
template <std::size_t N>
Series<N> sqrt(const Series<N>& a) {
    Series<N> s{};
    s[0] = std::sqrt(a[0]);
    for (std::size_t n = 1; n < N; ++n) {
        double acc = a[n];
        for (std::size_t k = 1; k < n; ++k) acc -= s[k] * s[n - k];
        s[n] = acc / (2.0 * s[0]);
    }
    return s;
}

/// 1/a; requires a[0] != 0.
template <std::size_t N>
Series<N> reciprocal(const Series<N>& a) {
    Series<N> b{};
    b[0] = 1.0 / a[0];
    for (std::size_t n = 1; n < N; ++n) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= n; ++k) acc += a[k] * b[n - k];
        b[n] = -acc / a[0];
    }
    return b;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace wbd::taylor

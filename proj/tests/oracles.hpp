#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance driver.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include "wbd/solver.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Sparse trigonometric polynomials: wavevector -> coefficient.
using Modes = std::map<std::array<int, 2>, cplx>;

inline Modes mul(const Modes& a, const Modes& b) {
    Modes out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out[{ka[0] + kb[0], ka[1] + kb[1]}] += ca * cb;
    return out;
}

inline Modes conj_modes(const Modes& a) {
    Modes out;
    for (const auto& [k, c] : a) out[{-k[0], -k[1]}] += std::conj(c);
    return out;
}

template <class F>
Modes apply(const Modes& a, double f0, F symbol) {
    Modes out;
    for (const auto& [k, c] : a) {
        const std::array<double, 2> xi{f0 * k[0], f0 * k[1]};
        out[k] = symbol(xi, std::hypot(xi[0], xi[1])) * c;
    }
    return out;
}

inline double K(double r) { return r == 0.0 ? 1.0 : std::tanh(r) / r; }
inline double sqrtK(double r) { return std::sqrt(K(r)); }
inline cplx riesz(std::array<double, 2> xi, double r, int axis) {
    return r == 0.0 ? cplx(0.0) : cplx(0.0, xi[axis] / r);
}

// (B^+, B^-) by explicit convolution of the mode lists, with transport
// coefficient c1 (-1/2 derived, +1/2 as written).
inline std::pair<Modes, Modes> nonlinearity(const Modes& up, const Modes& um, double f0, int d, double c1) {
    Modes sum = up, diff = up;
    for (const auto& [k, c] : um) {
        sum[k] += c;
        diff[k] -= c;
    }
    Modes transport, energy;
    for (int a = 0; a < d; ++a) {
        const Modes A = apply(diff, f0, [a](auto xi, double r) { return riesz(xi, r, a) * sqrtK(r); });
        const Modes div = apply(mul(sum, A), f0, [a](auto xi, double r) { return riesz(xi, r, a) * r * K(r); });
        for (const auto& [k, c] : div) transport[k] += c;
        for (const auto& [k, c] : mul(A, conj_modes(A))) energy[k] += c;
    }
    energy = apply(energy, f0, [](auto, double r) { return cplx(r * sqrtK(r)); });
    Modes bp, bm;
    for (const auto& [k, c] : transport) {
        bp[k] += c1 * c;
        bm[k] += c1 * c;
    }
    for (const auto& [k, c] : energy) {
        bp[k] += 0.25 * c;
        bm[k] -= 0.25 * c;
    }
    return {bp, bm};
}

inline wbd::SpectralField to_field(const wbd::GridSpec& g, const Modes& modes) {
    wbd::SpectralField f(g);
    for (const auto& [k, c] : modes) f.at(k) += c;
    return f;
}

}  // namespace oracle

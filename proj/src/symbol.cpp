#include "wbd/symbol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <limits>

#include "taylor.hpp"
#include "wbd/error.hpp"

namespace wbd {

namespace {

constexpr int kOrders = kMaxSymbolOrder + 1;
using Series = taylor::Series<kOrders>;

// Below this radius the product f_beta * sqrt(tanh) loses digits to
// cancellation in the higher derivatives; the odd power series of m is used.
constexpr double kSeriesRadius = 0.05;
constexpr int kSeriesTerms = 10;

// Polynomials in (T, S) = (tanh r, sech r): coeff[a][b] multiplies T^a S^b.
constexpr int kPolyDeg = 2 * kOrders + 2;
using TSPoly = std::array<std::array<double, kPolyDeg>, kPolyDeg>;

// d/dr T^a S^b = a T^{a-1} S^{b+2} - b T^{a+1} S^b, from T' = S^2, S' = -T S.
TSPoly differentiate(const TSPoly& p) {
    TSPoly q{};
    for (int a = 0; a < kPolyDeg; ++a)
        for (int b = 0; b < kPolyDeg; ++b) {
            const double c = p[a][b];
            if (c == 0.0) continue;
            if (a > 0) q[a - 1][b + 2] += a * c;
            if (b > 0) q[a + 1][b] -= b * c;
        }
    return q;
}

const std::array<TSPoly, kOrders>& tanh_derivative_polys() {
    static const std::array<TSPoly, kOrders> polys = [] {
        std::array<TSPoly, kOrders> out{};
        out[0][1][0] = 1.0;
        for (int j = 1; j < kOrders; ++j) out[j] = differentiate(out[j - 1]);
        return out;
    }();
    return polys;
}

double eval_poly(const TSPoly& p, double T, double S) {
    double acc = 0.0;
    double Ta = 1.0;
    for (int a = 0; a < kPolyDeg; ++a, Ta *= T) {
        double Sb = 1.0;
        for (int b = 0; b < kPolyDeg; ++b, Sb *= S)
            if (p[a][b] != 0.0) acc += p[a][b] * Ta * Sb;
    }
    return acc;
}

double sech(double r) {
    const double e = std::exp(-r);
    return 2.0 * e / (1.0 + e * e);
}

// Taylor coefficients of m in powers of r: m(r) = sum_n a_n r^{2n+1}.
std::array<double, kSeriesTerms> odd_series(int beta) {
    // tanh(x)/x = sum_n c_n x^{2n}, c_n = 2^{2n+2}(2^{2n+2}-1) B_{2n+2} / (2n+2)!
    static constexpr std::array<double, kSeriesTerms> bernoulli = {
        1.0 / 6.0,      -1.0 / 30.0,      1.0 / 42.0,          -1.0 / 30.0,     5.0 / 66.0,
        -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,     43867.0 / 798.0, -174611.0 / 330.0};
    taylor::Series<kSeriesTerms> c{};
    for (int n = 0; n < kSeriesTerms; ++n) {
        const double p = std::ldexp(1.0, 2 * n + 2);
        c[n] = p * (p - 1.0) * bernoulli[n] / taylor::factorial(2 * n + 2);
    }
    taylor::Series<kSeriesTerms> g{};
    g[0] = 1.0;
    g[1] = beta;
    return taylor::sqrt(taylor::mul(c, g));
}

Series series_taylor(int beta, double r) {
    static const auto s0 = odd_series(0);
    static const auto s1 = odd_series(1);
    const auto& a = beta == 0 ? s0 : s1;
    Series out{};
    for (int k = 0; k < kOrders; ++k) {
        double acc = 0.0;
        for (int n = kSeriesTerms - 1; n >= 0; --n) {
            const int p = 2 * n + 1;
            if (p < k) continue;
            double falling = 1.0;
            for (int i = 0; i < k; ++i) falling *= p - i;
            acc += a[n] * falling * std::pow(r, p - k);
        }
        out[k] = acc / taylor::factorial(k);
    }
    return out;
}

Series product_taylor(int beta, double r) {
    // m = f_beta * T0 with f_beta = sqrt(r + beta r^3), T0 = sqrt(tanh r).
    Series poly{};
    poly[0] = r + beta * r * r * r;
    poly[1] = 1.0 + 3.0 * beta * r * r;
    poly[2] = 3.0 * beta * r;
    poly[3] = beta;
    const Series f = taylor::sqrt(poly);

    const double T = std::tanh(r);
    const double S = sech(r);
    const auto& polys = tanh_derivative_polys();
    Series t{};
    for (int j = 0; j < kOrders; ++j) t[j] = eval_poly(polys[j], T, S) / taylor::factorial(j);
    const Series t0 = taylor::sqrt(t);
    return taylor::mul(f, t0);
}

}  // namespace

SymbolParams::SymbolParams(int beta) : beta_(beta) {
    if (beta != 0 && beta != 1) throw DomainError("beta must be 0 or 1");
}

DyadicScale DyadicScale::from_value(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
    int e = 0;
    const double mant = std::frexp(lambda, &e);
    if (mant != 0.5) throw DomainError("lambda must be a power of two");
    return DyadicScale(e - 1);
}

double eval_m(const SymbolParams& params, double r) {
    if (!(r >= 0.0)) throw DomainError("eval_m: r must be nonnegative");
    if (r == 0.0) return 0.0;
    if (std::isinf(r)) return r;
    return std::sqrt(r * (1.0 + params.beta() * r * r) * std::tanh(r));
}

std::array<double, kMaxSymbolOrder + 1> m_taylor(const SymbolParams& params, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("m_taylor: r must be positive");
    return r < kSeriesRadius ? series_taylor(params.beta(), r) : product_taylor(params.beta(), r);
}

double eval_m_derivative(const SymbolParams& params, double r, int k) {
    if (k < 1 || k > kMaxSymbolOrder) throw DomainError("eval_m_derivative: k must be in 1..6");
    if (!(r > 0.0)) throw DomainError("eval_m_derivative: r must be positive");
    return m_taylor(params, r)[k] * taylor::factorial(k);
}

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::m: return "m";
        case Quantity::m_prime: return "m_prime";
        case Quantity::m_second: return "m_second";
        case Quantity::m_k: return "m_k";
        case Quantity::inv_mprime_k: return "inv_mprime_k";
    }
    return "?";
}

Quantity quantity_from_string(std::string_view name) {
    for (auto q : {Quantity::m, Quantity::m_prime, Quantity::m_second, Quantity::m_k,
                   Quantity::inv_mprime_k})
        if (to_string(q) == name) return q;
    throw DomainError("unknown quantity: " + std::string(name));
}

double comparator(const SymbolParams& params, Quantity quantity, double r, int order) {
    const double sb = std::sqrt(static_cast<double>(params.beta()));
    switch (quantity) {
        case Quantity::m: return r * bracket(sb * r) / std::sqrt(bracket(r));
        case Quantity::m_prime: return bracket(sb * r) / std::sqrt(bracket(r));
        case Quantity::m_second: return r * bracket(sb * r) * std::pow(bracket(r), -2.5);
        case Quantity::m_k: return std::pow(r, 1.0 - order) * bracket(sb * r) / std::sqrt(bracket(r));
        case Quantity::inv_mprime_k: return std::sqrt(bracket(r)) / (r * bracket(sb * r));
    }
    return 0.0;
}

namespace {

double max_inv_mprime_derivative(const SymbolParams& params, double lambda, int k) {
    constexpr int kSamples = 61;
    double best = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double r = 0.5 * std::pow(4.0, static_cast<double>(i) / (kSamples - 1));
        const auto m = m_taylor(params, lambda * r);
        // Taylor series in h of d/dr m(lambda (r + h)) = lambda m'(lambda r + lambda h).
        Series g{};
        double lam_pow = lambda;
        for (int j = 0; j + 1 < kOrders; ++j) {
            g[j] = lam_pow * (j + 1) * m[j + 1];
            lam_pow *= lambda;
        }
        // Only the first kOrders-1 coefficients of g are exact.
        taylor::Series<kOrders - 1> gs{};
        std::copy_n(g.begin(), kOrders - 1, gs.begin());
        const auto inv = taylor::reciprocal(gs);
        best = std::max(best, std::abs(inv[k] * taylor::factorial(k)));
    }
    return best;
}

}  // namespace

BoundReport comparability_scan(const SymbolParams& params, Quantity quantity,
                               std::span<const double> r_grid, int order) {
    if (r_grid.empty()) throw DomainError("comparability_scan: empty grid");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i]))
            throw DomainError("comparability_scan: grid entries must be positive");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw DomainError("comparability_scan: grid must be strictly increasing");
    }
    if (quantity == Quantity::m_k && (order < 3 || order > 6))
        throw DomainError("comparability_scan: m_k needs order 3..6");
    if (quantity == Quantity::inv_mprime_k && (order < 0 || order > 5))
        throw DomainError("comparability_scan: inv_mprime_k needs order 0..5");

    BoundReport rep;
    rep.r_grid.assign(r_grid.begin(), r_grid.end());
    rep.quantity_tag = quantity;
    rep.order = order;
    rep.kind = (quantity == Quantity::m_k || quantity == Quantity::inv_mprime_k)
                   ? ClaimKind::bounded_above
                   : ClaimKind::comparable;
    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0.0;
    for (double r : r_grid) {
        double value = 0.0;
        switch (quantity) {
            case Quantity::m: value = eval_m(params, r); break;
            case Quantity::m_prime: value = eval_m_derivative(params, r, 1); break;
            case Quantity::m_second: value = std::abs(eval_m_derivative(params, r, 2)); break;
            case Quantity::m_k: value = std::abs(eval_m_derivative(params, r, order)); break;
            case Quantity::inv_mprime_k: value = max_inv_mprime_derivative(params, r, order); break;
        }
        const double ratio = value / comparator(params, quantity, r, order);
        rep.ratio_min = std::min(rep.ratio_min, ratio);
        rep.ratio_max = std::max(rep.ratio_max, ratio);
    }
    return rep;
}

double c_coeff(const SymbolParams& params, int d, double lambda) {
    if (d < 1) throw DomainError("c_coeff: d must be >= 1");
    if (!(lambda > 0.0)) throw DomainError("c_coeff: lambda must be positive");
    const double sb = std::sqrt(static_cast<double>(params.beta()));
    return std::pow(lambda, 0.5 * d - 1.0) * std::pow(bracket(sb * lambda), -0.5 * d) *
           std::pow(bracket(lambda), 0.25 * d + 1.0);
}

double c_coeff(const SymbolParams& params, int d, DyadicScale lambda) {
    return c_coeff(params, d, lambda.value());
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("log_grid: bad range");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

double frozen_envelope(Quantity quantity, int order) {
    static constexpr std::array<double, 4> kMk{2.5, 7.0, 30.0, 150.0};                  // k = 3..6
    static constexpr std::array<double, 6> kInv{6.0, 4.0, 8.0, 40.0, 400.0, 5000.0};  // k = 0..5
    if (quantity == Quantity::m_k && order >= 3 && order <= 6) return kMk[order - 3];
    if (quantity == Quantity::inv_mprime_k && order >= 0 && order <= 5) return kInv[order];
    throw DomainError("frozen_envelope: no envelope for " + std::string(to_string(quantity)) + " order " +
                      std::to_string(order));
}

bool within_envelope(const BoundReport& report) {
    if (report.kind == ClaimKind::comparable)
        return report.ratio_min > 0.0 && std::isfinite(report.ratio_max) && report.spread() <= 10.0;
    return report.ratio_max <= frozen_envelope(report.quantity_tag, report.order);
}

}  // namespace wbd

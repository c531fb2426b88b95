#include "doctest.h"

#include <cmath>

#include "wbd/dyadic.hpp"
#include "wbd/error.hpp"
#include "wbd/kernel.hpp"

using namespace wbd;

namespace {

// Periodic trapezoid on [-2, 2]^d: rho is smooth with compact support, so the
// rule converges spectrally and is independent of the library quadrature.
cplx brute_force_1d(int beta, double lambda, double x, double t, int n = 40000) {
    const SymbolParams p(beta);
    const CutoffSpec spec;
    const double h = 4.0 / n;
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = -2.0 + i * h;
        const double w = rho(spec, std::abs(xi));
        if (w == 0.0) continue;
        const double phase = lambda * x * xi + t * eval_m(p, lambda * std::abs(xi));
        acc += w * cplx(std::cos(phase), std::sin(phase));
    }
    return lambda * h * acc;
}

cplx brute_force_2d(double lambda, double x, double t, int n = 1200) {
    const SymbolParams p(0);
    const CutoffSpec spec;
    const double h = 4.0 / n;
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = -2.0 + i * h;
        for (int j = 0; j < n; ++j) {
            const double b = -2.0 + j * h;
            const double r = std::hypot(a, b);
            const double w = rho(spec, r);
            if (w == 0.0) continue;
            const double phase = lambda * x * a + t * eval_m(p, lambda * r);
            acc += w * cplx(std::cos(phase), std::sin(phase));
        }
    }
    return lambda * lambda * h * h * acc;
}

double rho_moment(int power) {
    const CutoffSpec spec;
    const int n = 200000;
    const double h = 1.5 / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = 0.5 + i * h;
        acc += (i == 0 || i == n ? 0.5 : 1.0) * rho(spec, s) * std::pow(s, power);
    }
    return acc * h;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("t = 0, x = 0 reduces to moments of the bump") {
    const auto one = eval_kernel(1, SymbolParams(0), DyadicScale(0), 0.0, 0.0);
    CHECK(one.value.real() == doctest::Approx(2.0 * rho_moment(0)).epsilon(1e-10));
    CHECK(one.value.imag() == 0.0);
    const auto two = eval_kernel(2, SymbolParams(0), DyadicScale(0), 0.0, 0.0);
    CHECK(two.value.real() == doctest::Approx(2.0 * M_PI * rho_moment(1)).epsilon(1e-10));
}

TEST_CASE("matches direct quadrature of the defining integral") {
    for (int beta : {0, 1})
        for (double x : {0.0, 1.3, -4.0})
            for (double t : {0.0, 3.0, -12.0}) {
                CAPTURE(beta);
                CAPTURE(x);
                CAPTURE(t);
                const cplx ref = brute_force_1d(beta, 1.0, x, t);
                const cplx got = eval_kernel(1, SymbolParams(beta), DyadicScale(0), std::abs(x), t).value;
                CHECK(std::abs(got - ref) <= 1e-10);
            }
    const cplx ref2 = brute_force_2d(2.0, 1.7, 5.0);
    const cplx got2 = eval_kernel(2, SymbolParams(0), DyadicScale(1), 1.7, 5.0).value;
    CHECK(std::abs(got2 - ref2) <= 1e-9 * std::max(1.0, std::abs(ref2)));
}

TEST_CASE("symmetries") {
    const SymbolParams p(1);
    for (int d : {1, 2, 3}) {
        const auto a = eval_kernel(d, p, DyadicScale(0), 2.5, 7.0);
        const auto b = eval_kernel(d, p, DyadicScale(0), 2.5, -7.0);
        CHECK(std::abs(a.value - std::conj(b.value)) <= 1e-12 * std::max(1.0, std::abs(a.value)));
        CHECK(eval_kernel(d, p, DyadicScale(0), 2.5, 0.0).value.imag() == 0.0);
    }
}

TEST_CASE("evenness reduction equals the radial formula in d = 1") {
    for (int beta : {0, 1})
        for (double x : {0.0, 0.7, 9.0, 60.0}) {
            const auto a = eval_kernel(1, SymbolParams(beta), DyadicScale(1), x, 20.0);
            const auto b = eval_kernel_radial(1, SymbolParams(beta), DyadicScale(1), x, 20.0);
            CHECK(std::abs(a.value - b.value) <= 1e-10);
        }
}

TEST_CASE("scaling at t = 0") {
    for (int d : {1, 2, 3}) {
        const double lam = 4.0;
        const auto big = eval_kernel(d, SymbolParams(0), DyadicScale(2), 0.3, 0.0);
        const auto unit = eval_kernel(d, SymbolParams(0), DyadicScale(0), lam * 0.3, 0.0);
        CHECK(big.value.real() == doctest::Approx(std::pow(lam, d) * unit.value.real()).epsilon(1e-12));
    }
}

TEST_CASE("error estimate and refinement stability") {
    KernelConfig cfg;
    const auto a = eval_kernel(2, SymbolParams(0), DyadicScale(0), 30.0, 40.0, cfg);
    CHECK(a.est_error <= 1e-8 * std::max(1.0, std::abs(a.value)));
    CHECK(a.quad_points > 0);
    cfg.min_panels *= 2;
    const auto b = eval_kernel(2, SymbolParams(0), DyadicScale(0), 30.0, 40.0, cfg);
    CHECK(std::abs(std::abs(a.value) - std::abs(b.value)) <= 1e-8 * std::abs(a.value));
}

TEST_CASE("node cap gives an explicit error") {
    KernelConfig cfg;
    cfg.node_cap = 10000;
    CHECK_THROWS_AS(eval_kernel(1, SymbolParams(0), DyadicScale(0), 0.0, 1e6, cfg), Unresolved);
    CHECK_THROWS_AS(eval_kernel(4, SymbolParams(0), DyadicScale(0), 0.0, 1.0), DomainError);
}

TEST_CASE("phase classification") {
    const SymbolParams p0(0);
    const DyadicScale one(0);
    // m_0' < 1, so slopes at or above 1 are never stationary.
    CHECK(classify_phase(p0, one, -1.0, 1.0, Sign::minus).regime == Regime::non_stationary_large);
    CHECK(classify_phase(p0, one, 5.0, 1.0, Sign::minus).regime == Regime::non_stationary_positive);
    const double slope = eval_m_derivative(p0, 1.0, 1);
    const auto st = classify_phase(p0, one, -slope * 10.0, 10.0, Sign::minus);
    REQUIRE(st.regime == Regime::stationary);
    CHECK(*st.stationary_r == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(eval_m_derivative(p0, *st.stationary_r, 1) - slope) <= 1e-10);
    CHECK(classify_phase(p0, one, slope * 10.0, 10.0, Sign::plus).regime == Regime::stationary);
    CHECK(classify_phase(p0, one, -1e-3, 10.0, Sign::minus).regime == Regime::non_stationary_small);
    CHECK_THROWS_AS(classify_phase(p0, one, 1.0, 0.0, Sign::minus), DomainError);
}

TEST_CASE("sup scan: threshold, decay and normalization") {
    const SymbolParams p(0);
    const DyadicScale one(0);
    CHECK_THROWS_AS(sup_scan(1, p, one, 5.0), DomainError);
    const auto a = sup_scan(1, p, one, 200.0);
    const auto b = sup_scan(1, p, one, 400.0);
    CHECK(b.sup < a.sup);
    CHECK(a.argmax_radius > 0.0);
    for (double t : {10.0, 100.0, 1000.0}) {
        const double n = normalized_sup(1, p, one, t, sup_scan(1, p, one, t).sup);
        CHECK(n > 0.5);
        CHECK(n < 5.0);
    }
}

TEST_CASE("decay fit in d = 1") {
    std::vector<double> ts;
    for (int i = 0; i < 9; ++i) ts.push_back(100.0 * std::pow(10.0, i / 8.0));
    const auto fit = decay_fit(1, SymbolParams(0), DyadicScale(0), ts);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.02));
    CHECK_THROWS_AS(decay_fit(1, SymbolParams(0), DyadicScale(0), std::span(ts).first(5)), DomainError);
}

}

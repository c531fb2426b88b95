#include "wbd/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wbd/error.hpp"
#include "wbd/quadrature.hpp"

namespace wbd {

namespace {

constexpr int kNodes = 20;
constexpr double kGrading = 0.15;
constexpr double kInnermost = 1e-18;
constexpr double kSmallArgument = 1e-6;

void check_alpha(double alpha) {
    if (!(alpha > -0.5)) throw DomainError("bessel: alpha must exceed -1/2");
}

bool even_integer(double x) { return x == std::floor(x) && std::fmod(x, 2.0) == 0.0; }

// int_a^b sin(phi)^{2 alpha} cos(r cos phi) dphi with one GL panel.
double panel(double alpha, double r, double a, double b) {
    const auto& rule = gauss_legendre(kNodes);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double phi = mid + half * rule.nodes[i];
        const double w = alpha == 0.0 ? 1.0 : std::pow(std::sin(phi), 2.0 * alpha);
        acc += rule.weights[i] * w * std::cos(r * std::cos(phi));
    }
    return half * acc;
}

// int_0^{pi/2} sin(phi)^{2 alpha} cos(r cos phi) dphi.
double poisson_integral(double alpha, double r) {
    constexpr double quarter_turn = 0.5 * std::numbers::pi;
    const double width = std::min(std::numbers::pi / 8.0, 2.0 * std::numbers::pi / (r + 1.0));
    const int panels = static_cast<int>(std::ceil(quarter_turn / width));
    const double h = quarter_turn / panels;
    double acc = 0.0;
    for (int p = 1; p < panels; ++p) acc += panel(alpha, r, p * h, (p + 1) * h);

    if (even_integer(2.0 * alpha)) return acc + panel(alpha, r, 0.0, h);

    // Algebraic endpoint behaviour phi^{2 alpha}: geometric grading toward 0.
    double hi = h;
    while (hi > kInnermost) {
        const double lo = hi * kGrading;
        acc += panel(alpha, r, lo, hi);
        hi = lo;
    }
    // Remaining sliver [0, hi]: sin(phi)^{2 alpha} ~ phi^{2 alpha}, cos(r cos phi) ~ cos r.
    acc += std::cos(r) * std::pow(hi, 2.0 * alpha + 1.0) / (2.0 * alpha + 1.0);
    return acc;
}

}  // namespace

namespace detail {

double bessel_tilde_quadrature(double alpha, double r) {
    check_alpha(alpha);
    const double norm =
        2.0 / (std::pow(2.0, alpha) * std::tgamma(alpha + 0.5) * std::sqrt(std::numbers::pi));
    return norm * poisson_integral(alpha, r);
}

double bessel_j_asymptotic(double alpha, double r) {
    check_alpha(alpha);
    const double mu = 4.0 * alpha * alpha;
    double P = 0.0, Q = 0.0;
    double term = 1.0;  // a_k(alpha) / r^k
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            const double odd = 2.0 * k - 1.0;
            term *= (mu - odd * odd) / (k * 8.0 * r);
        }
        const double mag = std::abs(term);
        if (mag > prev) break;
        // a_k enters P (even k) or Q (odd k) with sign (-1)^{floor(k/2)}.
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            P += sign * term;
        } else {
            Q += sign * term;
        }
        if (mag < 1e-17 * (std::abs(P) + std::abs(Q)) || term == 0.0) break;
        prev = mag;
    }
    const double omega = r - 0.5 * alpha * std::numbers::pi - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * r)) * (P * std::cos(omega) - Q * std::sin(omega));
}

}  // namespace detail

double bessel_j(double alpha, double r) {
    check_alpha(alpha);
    if (!(r >= 0.0)) throw DomainError("bessel_j: r must be nonnegative");
    if (r > kBesselAsymptoticRadius) return detail::bessel_j_asymptotic(alpha, r);
    if (r == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    return std::pow(r, alpha) * detail::bessel_tilde_quadrature(alpha, r);
}

double bessel_tilde(double alpha, double r) {
    check_alpha(alpha);
    if (!(r >= 0.0)) throw DomainError("bessel_tilde: r must be nonnegative");
    if (r < kSmallArgument) return 1.0 / (std::pow(2.0, alpha) * std::tgamma(alpha + 1.0));
    if (r > kBesselAsymptoticRadius) return detail::bessel_j_asymptotic(alpha, r) / std::pow(r, alpha);
    return detail::bessel_tilde_quadrature(alpha, r);
}

}  // namespace wbd

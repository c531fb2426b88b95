#pragma once

namespace wbd {

/// J_alpha(r) for alpha > -1/2, r >= 0. Poisson integral
///   J_alpha(r) = (r/2)^alpha / (Gamma(alpha + 1/2) sqrt(pi))
///                * int_{-1}^{1} e^{irs} (1 - s^2)^{alpha - 1/2} ds
/// on r <= 50 (graded Gauss-Legendre after s = cos phi), Hankel
/// asymptotic expansion above.
double bessel_j(double alpha, double r);

/// r^{-alpha} J_alpha(r), with the limit 1 / (2^alpha Gamma(alpha + 1)) at 0.
double bessel_tilde(double alpha, double r);

/// Radius where bessel_j switches from quadrature to the asymptotic series.
inline constexpr double kBesselAsymptoticRadius = 50.0;

namespace detail {
// Exposed so tests can compare the two evaluation routes at the switch-over.
double bessel_tilde_quadrature(double alpha, double r);
double bessel_j_asymptotic(double alpha, double r);
}  // namespace detail

}  // namespace wbd

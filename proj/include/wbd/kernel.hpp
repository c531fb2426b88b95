#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "wbd/dyadic_scale.hpp"
#include "wbd/spectral.hpp"
#include "wbd/symbol.hpp"

namespace wbd {

/// Quadrature and scan controls for the localized kernel.
struct KernelConfig {
    int nodes_per_panel = 20;         // Gauss-Legendre nodes per panel
    int min_panels = 32;              // panels on [1/2, 2] before refinement
    double panels_per_oscillation = 1.0;
    long node_cap = 2'000'000;        // per integral, over both refinement levels
    double rel_tol = 1e-8;            // est_error <= rel_tol * max(1, |value|)
    double tcond_factor = 10.0;       // t >= factor * lambda^{-1/2} <sqrt(beta) lambda>^{-1}
    double scan_octaves = 3.0;        // x-window width around the stationary set
    int coarse_points = 64;
    double golden_rel_tol = 1e-6;
    bool parallel = true;             // spread scan samples over the OpenMP pool
};

/// I_lambda(x, t) = lambda^d int e^{i lambda x.xi + i t m_beta(lambda xi)} rho(xi) dxi
/// at |x| = x_radius.
struct KernelSample {
    int d = 1;
    int beta = 0;
    DyadicScale lambda;
    double x_radius = 0.0;
    double t = 0.0;
    cplx value;
    int quad_points = 0;
    double est_error = 0.0;
};

/// d = 1 uses the evenness reduction 2 lambda int_{1/2}^2 cos(lambda x xi)
/// e^{i t m(lambda xi)} rho(xi) dxi; d = 2, 3 use the radial Bessel form.
/// Throws Unresolved when the node cap would be exceeded.
KernelSample eval_kernel(int d, const SymbolParams& params, DyadicScale lambda, double x_radius,
                         double t, const KernelConfig& cfg = {});

/// Radial formula (2 pi)^{d/2} lambda^d int_{1/2}^2 e^{i t m(lambda r)}
/// (lambda r |x|)^{-(d-2)/2} J_{(d-2)/2}(lambda r |x|) r^{d-1} rho(r) dr,
/// d in {1, 2, 3}; for d = 1 the Bessel factor is sqrt(2/pi) cos.
KernelSample eval_kernel_radial(int d, const SymbolParams& params, DyadicScale lambda,
                                double x_radius, double t, const KernelConfig& cfg = {});

enum class Regime { stationary, non_stationary_small, non_stationary_large, non_stationary_positive };

struct PhaseRegime {
    Regime regime = Regime::non_stationary_positive;
    std::optional<double> stationary_r;
};

/// Stationary-point analysis of the phase lambda x xi -+ t m(lambda xi) on
/// xi in [1/2, 2]; x is a signed position. Sign::minus is the propagator
/// S(-t) (phase + t m), Sign::plus is S(t) (phase - t m).
PhaseRegime classify_phase(const SymbolParams& params, DyadicScale lambda, double x, double t,
                           Sign sign);

/// Smallest t satisfying the large-time regime condition.
double tcond_threshold(const SymbolParams& params, DyadicScale lambda, const KernelConfig& cfg = {});

struct SupResult {
    double sup = 0.0;
    double argmax_radius = 0.0;
    int evaluations = 0;
};

/// sup_x |I_lambda(x, t)|: coarse scan over a window around the stationary
/// set plus golden-section refinement at the coarse maximum.
SupResult sup_scan(int d, const SymbolParams& params, DyadicScale lambda, double t,
                   const KernelConfig& cfg = {});

struct DecayPoint {
    double t = 0.0;
    double sup = 0.0;
    bool resolved = false;
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<DecayPoint> points;
};

/// Least-squares slope of log sup_scan against log t. Unresolved samples are
/// dropped; fewer than 8 resolved points is an error.
DecayFit decay_fit(int d, const SymbolParams& params, DyadicScale lambda, std::span<const double> t_list,
                   const KernelConfig& cfg = {});

/// sup * t^{d/2} / c_{beta,d}(lambda).
double normalized_sup(int d, const SymbolParams& params, DyadicScale lambda, double t, double sup);

}  // namespace wbd

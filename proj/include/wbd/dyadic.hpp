#pragma once

#include "wbd/dyadic_scale.hpp"
#include "wbd/spectral.hpp"

namespace wbd {

enum class Transition { exp_glue };

/// Smooth even cutoff chi: 1 on [-1, 1], 0 outside [-2, 2]. With exp_glue,
/// on 1 < |s| < 2 chi(s) = g(2-|s|) / (g(2-|s|) + g(|s|-1)), g(x) = exp(-1/x).
struct CutoffSpec {
    Transition transition = Transition::exp_glue;
    double tolerance = 1e-12;  // partition-of-unity check tolerance
};

double chi(const CutoffSpec& spec, double s);

/// Annular bump rho(s) = chi(s) - chi(2s), supported in 1/2 <= |s| <= 2.
double rho(const CutoffSpec& spec, double s);

/// rho_lambda(s) = rho(s / lambda).
inline double rho_lambda(const CutoffSpec& spec, DyadicScale lambda, double s) {
    return rho(spec, s / lambda.value());
}

/// |sum_{j=-J..J} rho(s / 2^j) - 1|.
double partition_defect(const CutoffSpec& spec, double s, int J);

/// Littlewood-Paley projection: coefficient at xi times rho(|xi| / lambda).
SpectralField project(const SpectralField& field, DyadicScale lambda, const CutoffSpec& spec = {});

}  // namespace wbd

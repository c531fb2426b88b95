#pragma once

#include <complex>
#include <span>

#include "wbd/spectral.hpp"

namespace wbd::fft {

/// Physical samples -> Fourier coefficients (scaled by 1/n^d).
void forward(const GridSpec& grid, std::span<const cplx> values, std::span<cplx> coeffs);
/// Fourier coefficients -> physical samples.
void inverse(const GridSpec& grid, std::span<const cplx> coeffs, std::span<cplx> values);

}  // namespace wbd::fft

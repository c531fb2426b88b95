#pragma once

#include <array>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbd/symbol.hpp"

namespace wbd {

using cplx = std::complex<double>;

/// Uniform periodic grid on [0, L)^d, d in {1, 2}, n points per axis.
/// Frequencies per axis are 2 pi k / L for k in [-n/2, n/2), stored in FFT
/// order (k = 0, 1, ..., n/2-1, -n/2, ..., -1); axis 0 varies slowest.
class GridSpec {
public:
    GridSpec(int d, int n, double length);

    int dim() const noexcept { return d_; }
    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    std::size_t size() const noexcept { return size_; }
    double spacing() const noexcept { return length_ / n_; }
    double cell_volume() const noexcept;
    double fundamental() const noexcept;

    /// Signed wavenumber of a per-axis storage index.
    int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
    /// Storage index of a signed wavenumber in [-n/2, n/2).
    int index_of(int k) const noexcept { return k >= 0 ? k : k + n_; }

    std::array<int, 2> wavevector(std::size_t flat) const noexcept;
    std::size_t flat_index(std::array<int, 2> k) const noexcept;
    std::array<double, 2> xi(std::size_t flat) const noexcept;
    double xi_norm(std::size_t flat) const noexcept;

    /// Flat index of the frequency -xi.
    std::size_t mirror(std::size_t flat) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int d_;
    int n_;
    double length_;
    std::size_t size_;
};

/// Fourier coefficients of a (possibly vector-valued) function on the torus.
/// f(x) = sum_k c_k exp(i xi_k . x), so ||f||_{L^2}^2 = L^d sum |c_k|^2.
class SpectralField {
public:
    explicit SpectralField(GridSpec grid, int components = 1);

    /// Samples at x_j = j L / n (component-major layout).
    static SpectralField from_physical(const GridSpec& grid, std::span<const cplx> values,
                                       int components = 1);

    const GridSpec& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }

    std::span<cplx> coeffs() noexcept { return data_; }
    std::span<const cplx> coeffs() const noexcept { return data_; }
    std::span<cplx> component(int c);
    std::span<const cplx> component(int c) const;

    cplx& at(std::array<int, 2> k, int c = 0);
    cplx at(std::array<int, 2> k, int c = 0) const;

    /// Physical-space samples of one component.
    std::vector<cplx> to_physical(int c = 0) const;

    /// Single component as a scalar field.
    SpectralField extract(int c) const;

    double l2_norm() const;
    /// max_k |c(-k) - conj(c(k))|: zero for real-valued functions.
    double conjugate_symmetry_defect() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(cplx s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

private:
    void check_compatible(const SpectralField& o) const;

    GridSpec grid_;
    int components_;
    std::vector<cplx> data_;
};

/// Stack scalar fields into one vector field.
SpectralField stack(std::span<const SpectralField> parts);

enum class SymbolKind { m, L, K, sqrt_K, abs_D, bracket_pow, riesz };

/// A Fourier multiplier acting coefficient-wise. Values at xi = 0 are the
/// continuous limits (K = L = sqrt K = 1) or zero (|D|, m, Riesz).
struct Multiplier {
    SymbolKind kind = SymbolKind::K;
    int beta = 0;
    double power = 0.0;  // exponent s of <D>^s
    int axis = 0;        // Riesz component

    static Multiplier m(int beta) { return {SymbolKind::m, beta, 0.0, 0}; }
    static Multiplier L(int beta) { return {SymbolKind::L, beta, 0.0, 0}; }
    static Multiplier K() { return {SymbolKind::K, 0, 0.0, 0}; }
    static Multiplier sqrt_K() { return {SymbolKind::sqrt_K, 0, 0.0, 0}; }
    static Multiplier abs_D() { return {SymbolKind::abs_D, 0, 0.0, 0}; }
    static Multiplier bracket(double s) { return {SymbolKind::bracket_pow, 0, s, 0}; }
    static Multiplier riesz(int axis) { return {SymbolKind::riesz, 0, 0.0, axis}; }

    /// Names: m_beta0, m_beta1, L_beta0, L_beta1, K, sqrtK, absD,
    /// bracket^<s> (e.g. bracket^0.5), R1, R2.
    static Multiplier parse(std::string_view name);

    cplx value(std::array<double, 2> xi, double norm) const;
};

/// K(r) = tanh(r)/r with K(0) = 1.
double symbol_K(double r);

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& symbol);

/// Riesz gradient R f of a scalar field (d components).
SpectralField riesz_gradient(const SpectralField& scalar);
/// Riesz divergence R . v of a d-component field.
SpectralField riesz_divergence(const SpectralField& vector);

enum class Sign { plus = 1, minus = -1 };

/// S_{m_beta}(+-t) = exp(-+ i t m_beta(D)).
SpectralField propagate(const SpectralField& field, const SymbolParams& params, Sign sign, double t);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MixedNormSpec {
    double q = 2.0;  // time exponent, kInf allowed
    double r = 2.0;  // space exponent, kInf allowed
    double T = 1.0;
    std::size_t n_t = 2;
};

/// Spatial L^r norm from physical samples with weight (L/n)^d.
double lebesgue_norm(const SpectralField& field, double r);

/// ||f||_{L^q_T L^r_x} for samples at n_t uniform times on [0, T]
/// (trapezoid in time).
double mixed_norm(std::span<const SpectralField> trajectory, const MixedNormSpec& spec);

/// Fraction of L^2 mass at wavenumbers with max_i |k_i| > n/4.
double tail_mass(const SpectralField& field);

/// Zero all modes with max_i |k_i| > n/3 (2/3 rule).
void dealias(SpectralField& field);

}  // namespace wbd

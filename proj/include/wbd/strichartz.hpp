#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbd/dyadic_scale.hpp"
#include "wbd/spectral.hpp"
#include "wbd/symbol.hpp"

namespace wbd {

/// Lebesgue exponent: a positive rational or infinity. Arithmetic on
/// reciprocals is exact.
class Exponent {
public:
    Exponent(std::int64_t num, std::int64_t den = 1);
    static Exponent infinity();
    /// "inf", "8" or "8/3".
    static Exponent parse(std::string_view text);

    bool is_infinite() const noexcept { return den_ == 0; }
    double value() const noexcept;
    /// 1/p as a reduced fraction (0/1 for infinity).
    std::int64_t inv_num() const noexcept { return den_; }
    std::int64_t inv_den() const noexcept { return num_; }
    std::string to_string() const;

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    Exponent() = default;
    std::int64_t num_ = 1;
    std::int64_t den_ = 0;
};

/// q > 2, r >= 2 and 2/q + d/r = d/2.
bool admissible(int d, Exponent q, Exponent r);

/// r = 2qd / (qd - 4), the space exponent paired with q in the X_lambda norm.
/// Requires qd > 4.
Exponent paired_space_exponent(int d, Exponent q);

/// [c_{beta,d}(lambda)]^{2/(qd)}.
double strichartz_prefactor(const SymbolParams& params, int d, DyadicScale lambda, Exponent q);

/// [c_{0,d}(lambda)]^{2/(qd)} / <lambda>^{3/(2q)}.
double beta0_prefactor_ratio(int d, DyadicScale lambda, Exponent q);

/// Torus used for lambda-localized experiments. d = 1: L = 32 pi / lambda
/// (annulus on shells 8 to 32), n = 128. d = 2: L = 16 pi / lambda (shells
/// 4 to 16), n = 64.
GridSpec strichartz_grid(int d, DyadicScale lambda);

/// Complex Gaussian coefficients on lambda/2 <= |xi| <= 2 lambda, then
/// projected with P_lambda. Sample i depends only on (seed, i).
std::vector<SpectralField> random_localized_samples(const GridSpec& grid, DyadicScale lambda,
                                                    std::size_t count, std::uint64_t seed);

struct StrichartzSetup {
    int d = 2;
    int beta = 0;
    DyadicScale lambda;
    Exponent q{4};
    Exponent r{4};
    double T = 1.0;
    std::size_t n_t = 33;  // time samples on [0, T]
};

/// ||S(t) P_lambda f||_{L^q_T L^r} / ([c_{beta,d}]^{2/(qd)} ||P_lambda f||_{L^2}).
double strichartz_ratio_one(const StrichartzSetup& setup, const SpectralField& sample);

/// Maximum of strichartz_ratio_one over the samples.
double strichartz_ratio(const StrichartzSetup& setup, std::span<const SpectralField> samples);

/// Sorted triple satisfies lambda_max / lambda_med <= 4.
bool in_Lambda(DyadicScale l0, DyadicScale l1, DyadicScale l2);

/// Grid fine enough that products of the lambda_1 and lambda_2 annuli are
/// alias-free, with the smallest scale spanning at least 4 lattice shells.
GridSpec bilinear_grid(int d, DyadicScale l0, DyadicScale l1, DyadicScale l2);

/// Variant 1: |D| K P_{l0} R.(u R sqrt(K) v).
/// Variant 2: |D| sqrt(K) P_{l0} (R sqrt(K) u . R sqrt(K) v).
/// No Lambda check: used to observe the vanishing directly.
SpectralField projected_product(int variant, DyadicScale l0, const SpectralField& u,
                                const SpectralField& v);

/// Same bilinear expression without P_{l0}.
SpectralField unprojected_product(int variant, const SpectralField& u, const SpectralField& v);

/// Computable stand-in for ||u||_{X_lambda}: the larger of
/// ||P u||_{L^inf_T L^2} and <lambda>^{-3/(2q)} ||P u||_{L^q_T L^r}, r paired with q.
double x_lambda_surrogate(std::span<const SpectralField> trajectory, DyadicScale lambda, Exponent q,
                          double T);

struct BilinearSetup {
    int variant = 1;
    int d = 2;
    DyadicScale l0, l1, l2;
    Exponent q{4};
    double T = 1.0;
    std::size_t n_t = 33;
};

/// Right-hand-side weight of the bilinear estimate without the X norms.
double bilinear_weight(const BilinearSetup& setup);

/// Ratio of the L^1_T L^2 norm of the projected product of the free
/// evolutions of (u0, v0) to its bound.
double bilinear_ratio_one(const BilinearSetup& setup, const SpectralField& u0, const SpectralField& v0);

/// Maximum over paired samples. Throws DomainError outside Lambda.
double bilinear_ratio(const BilinearSetup& setup, std::span<const SpectralField> u_samples,
                      std::span<const SpectralField> v_samples);

struct RatioRow {
    int d = 0;
    int beta = 0;
    std::vector<double> lambdas;
    Exponent q{4};
    Exponent r{4};
    double T = 0.0;
    double ratio = 0.0;
    std::size_t n_samples = 0;
};

/// CSV with columns d,beta,lambda,q,r,T,ratio,n_samples; multiple scales are
/// joined with ';' in the lambda column.
void write_ratio_csv(std::ostream& out, std::span<const RatioRow> rows);

}  // namespace wbd

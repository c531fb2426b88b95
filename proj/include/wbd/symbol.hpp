#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbd/dyadic_scale.hpp"

namespace wbd {

/// Surface-tension switch: 0 for pure gravity waves, 1 for capillary-gravity.
class SymbolParams {
public:
    explicit SymbolParams(int beta);
    int beta() const noexcept { return beta_; }

private:
    int beta_;
};

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double bracket(double x) noexcept { return std::sqrt(1.0 + x * x); }

/// m_beta(r) = sqrt(r (1 + beta r^2) tanh r), r >= 0.
double eval_m(const SymbolParams& params, double r);

/// k-th derivative of m_beta at r > 0, 1 <= k <= 6.
double eval_m_derivative(const SymbolParams& params, double r, int k);

constexpr int kMaxSymbolOrder = 6;

/// Taylor coefficients m^{(j)}(r)/j! for j = 0..6.
std::array<double, kMaxSymbolOrder + 1> m_taylor(const SymbolParams& params, double r);

enum class Quantity { m, m_prime, m_second, m_k, inv_mprime_k };

enum class ClaimKind { comparable, bounded_above };

std::string_view to_string(Quantity q);
Quantity quantity_from_string(std::string_view name);

struct BoundReport {
    std::vector<double> r_grid;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    Quantity quantity_tag = Quantity::m;
    int order = 0;
    ClaimKind kind = ClaimKind::comparable;

    /// ratio_max / ratio_min; only meaningful for comparable claims.
    double spread() const { return ratio_max / ratio_min; }
};

/// Ratio of a symbol quantity to its comparator on a strictly increasing
/// positive grid. `order` selects k for m_k (3..6) and inv_mprime_k (0..5).
/// For inv_mprime_k the grid holds frequency scales lambda and each entry
/// is the maximum over r in [1/2, 2] of |d^k/dr^k (1 / d/dr m(lambda r))|.
BoundReport comparability_scan(const SymbolParams& params, Quantity quantity,
                               std::span<const double> r_grid, int order = 0);

/// Frozen upper envelope for the ratio of a bounded_above claim (about twice
/// the maximum measured over beta in {0, 1} on [1e-4, 1e4]).
double frozen_envelope(Quantity quantity, int order);

/// True when the report meets its claim: spread <= 10 for comparable
/// claims, ratio_max <= frozen_envelope for bounded_above claims.
bool within_envelope(const BoundReport& report);

/// The comparator function used by comparability_scan at one point.
double comparator(const SymbolParams& params, Quantity quantity, double r, int order);

/// c_{beta,d}(lambda) = lambda^{d/2-1} <sqrt(beta) lambda>^{-d/2} <lambda>^{d/4+1}.
double c_coeff(const SymbolParams& params, int d, DyadicScale lambda);
double c_coeff(const SymbolParams& params, int d, double lambda);

/// Log-spaced grid of n points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace wbd

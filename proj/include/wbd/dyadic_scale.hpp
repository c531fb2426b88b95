#pragma once

#include <cmath>

namespace wbd {

/// Dyadic frequency scale lambda = 2^j.
class DyadicScale {
public:
    constexpr DyadicScale() = default;
    explicit DyadicScale(int j) : j_(j), lambda_(std::ldexp(1.0, j)) {}

    /// Exact power of two; throws DomainError otherwise.
    static DyadicScale from_value(double lambda);

    int exponent() const noexcept { return j_; }
    double value() const noexcept { return lambda_; }

    friend bool operator==(DyadicScale a, DyadicScale b) noexcept { return a.j_ == b.j_; }

private:
    int j_ = 0;
    double lambda_ = 1.0;
};

}  // namespace wbd

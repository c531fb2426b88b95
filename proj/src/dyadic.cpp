#include "wbd/dyadic.hpp"

#include <cmath>
#include <vector>

#include "wbd/kernels.hpp"

namespace wbd {

namespace {

double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double chi(const CutoffSpec&, double s) {
    const double a = std::abs(s);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double up = glue(2.0 - a);
    return up / (up + glue(a - 1.0));
}

double rho(const CutoffSpec& spec, double s) { return chi(spec, s) - chi(spec, 2.0 * s); }

double partition_defect(const CutoffSpec& spec, double s, int J) {
    double sum = 0.0;
    for (int j = -J; j <= J; ++j) sum += rho(spec, std::ldexp(s, -j));
    return std::abs(sum - 1.0);
}

SpectralField project(const SpectralField& field, DyadicScale lambda, const CutoffSpec& spec) {
    const auto& g = field.grid();
    std::vector<double> factor(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) factor[i] = rho_lambda(spec, lambda, g.xi_norm(i));
    SpectralField out = field;
    for (int c = 0; c < out.components(); ++c) kernels::scale(out.component(c), factor);
    return out;
}

}  // namespace wbd

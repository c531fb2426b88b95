#pragma once

#include <span>
#include <vector>

namespace wbd {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule (computed once per n and cached; thread-safe).
const GaussRule& gauss_legendre(int n);

/// Nodes and weights of a composite rule: `panels` equal panels on [a, b],
/// each carrying the n-point Gauss-Legendre rule.
struct CompositeRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

CompositeRule composite_gauss(double a, double b, int panels, int n);

}  // namespace wbd

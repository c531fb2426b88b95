#include "wbd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wbd/bessel.hpp"
#include "wbd/dyadic.hpp"
#include "wbd/error.hpp"
#include "wbd/kernels.hpp"
#include "wbd/quadrature.hpp"

namespace wbd {

namespace {

enum class Route { evenness, radial };

struct LevelRule {
    std::vector<double> xi;
    std::vector<cplx> weight;  // w_i rho(xi_i) xi_i^{d-1} e^{i t m(lambda xi_i)}
};

// Quadrature for I_lambda(., t) at fixed (d, beta, lambda, t). The x-independent
// part of the integrand is folded into complex weights so that a scan over x
// only pays for the radial profile.
class KernelIntegrator {
public:
    KernelIntegrator(int d, const SymbolParams& params, DyadicScale lambda, double t,
                     const KernelConfig& cfg, Route route)
        : d_(d), params_(params), lambda_(lambda), t_(t), cfg_(cfg), route_(route) {
        if (d < 1 || d > 3) throw DomainError("kernel: d must be 1, 2 or 3");
        if (route == Route::evenness && d != 1) throw DomainError("kernel: evenness route is d = 1 only");
        const double lam = lambda.value();
        phase_span_ = std::abs(t) * (eval_m(params, 2.0 * lam) - eval_m(params, 0.5 * lam));
        prefactor_ = std::pow(lam, d);
        if (route == Route::radial) prefactor_ *= std::pow(2.0 * std::numbers::pi, 0.5 * d);
    }

    // Precompute refinement levels needed for radii up to max_radius.
    void prepare(double max_radius) {
        const int top = start_level(max_radius) + 1;
        for (int p = static_cast<int>(levels_.size()); p <= top; ++p) {
            if (nodes_at(p) > cfg_.node_cap) break;
            levels_.push_back(build(p));
        }
    }

    KernelSample eval(double x_radius) const {
        if (!(x_radius >= 0.0) || !std::isfinite(x_radius))
            throw DomainError("kernel: x_radius must be finite and nonnegative");
        KernelSample s;
        s.d = d_;
        s.beta = params_.beta();
        s.lambda = lambda_;
        s.x_radius = x_radius;
        s.t = t_;
        int p = start_level(x_radius);
        for (;; ++p) {
            const long points = nodes_at(p) + nodes_at(p + 1);
            if (points > cfg_.node_cap)
                throw Unresolved("kernel: node cap exceeded at |x| = " + std::to_string(x_radius) +
                                 ", t = " + std::to_string(t_));
            const cplx coarse = integrate(p, x_radius);
            const cplx fine = integrate(p + 1, x_radius);
            const double err = std::abs(fine - coarse);
            if (err <= cfg_.rel_tol * std::max(1.0, std::abs(fine))) {
                s.value = fine;
                s.est_error = err;
                s.quad_points = static_cast<int>(points);
                return s;
            }
        }
    }

private:
    long nodes_at(int level) const {
        return static_cast<long>(cfg_.min_panels) * (1L << level) * cfg_.nodes_per_panel;
    }

    int start_level(double x_radius) const {
        const double lam = lambda_.value();
        double oscillations = phase_span_ / (2.0 * std::numbers::pi);
        oscillations += 1.5 * lam * x_radius / (2.0 * std::numbers::pi);
        const double needed = oscillations * cfg_.panels_per_oscillation;
        int p = 0;
        while (cfg_.min_panels * std::ldexp(1.0, p) < needed) ++p;
        return p;
    }

    LevelRule build(int level) const {
        const int panels = cfg_.min_panels << level;
        const auto rule = composite_gauss(0.5, 2.0, panels, cfg_.nodes_per_panel);
        const CutoffSpec spec;
        const double lam = lambda_.value();
        LevelRule out;
        out.xi.reserve(rule.nodes.size());
        out.weight.reserve(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double xi = rule.nodes[i];
            const double bump = rho(spec, xi);
            if (bump == 0.0) continue;
            const double phase = t_ * eval_m(params_, lam * xi);
            const double w = rule.weights[i] * bump * std::pow(xi, d_ - 1);
            out.xi.push_back(xi);
            out.weight.push_back(w * cplx(std::cos(phase), std::sin(phase)));
        }
        return out;
    }

    double profile(double arg) const {
        if (route_ == Route::evenness) return 2.0 * std::cos(arg);
        switch (d_) {
            case 1: return std::sqrt(2.0 / std::numbers::pi) * std::cos(arg);
            case 2: return bessel_tilde(0.0, arg);
            default: return bessel_tilde(0.5 * (d_ - 2), arg);
        }
    }

    cplx integrate(int level, double x_radius) const {
        LevelRule local;
        const LevelRule* rule = nullptr;
        if (level < static_cast<int>(levels_.size())) {
            rule = &levels_[level];
        } else {
            local = build(level);
            rule = &local;
        }
        const double scale = lambda_.value() * x_radius;
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rule->xi.size(); ++i) acc += rule->weight[i] * profile(scale * rule->xi[i]);
        return prefactor_ * acc;
    }

    int d_;
    SymbolParams params_;
    DyadicScale lambda_;
    double t_;
    KernelConfig cfg_;
    Route route_;
    double phase_span_ = 0.0;
    double prefactor_ = 1.0;
    std::vector<LevelRule> levels_;
};

KernelIntegrator make_integrator(int d, const SymbolParams& params, DyadicScale lambda, double t,
                                 const KernelConfig& cfg) {
    return KernelIntegrator(d, params, lambda, t, cfg, d == 1 ? Route::evenness : Route::radial);
}

// m'(lambda r) at the ends of r in [1/2, 2]; m' is monotone there.
std::pair<double, double> slope_window(const SymbolParams& params, DyadicScale lambda) {
    const double a = eval_m_derivative(params, 0.5 * lambda.value(), 1);
    const double b = eval_m_derivative(params, 2.0 * lambda.value(), 1);
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

KernelSample eval_kernel(int d, const SymbolParams& params, DyadicScale lambda, double x_radius,
                         double t, const KernelConfig& cfg) {
    return make_integrator(d, params, lambda, t, cfg).eval(x_radius);
}

KernelSample eval_kernel_radial(int d, const SymbolParams& params, DyadicScale lambda,
                                double x_radius, double t, const KernelConfig& cfg) {
    return KernelIntegrator(d, params, lambda, t, cfg, Route::radial).eval(x_radius);
}

PhaseRegime classify_phase(const SymbolParams& params, DyadicScale lambda, double x, double t,
                           Sign sign) {
    if (t == 0.0) throw DomainError("classify_phase: t must be nonzero");
    // Phase derivative lambda (x/t +- m'(lambda xi)) vanishes iff slope = m'(lambda xi).
    const double slope = sign == Sign::minus ? -x / t : x / t;
    PhaseRegime out;
    if (!(slope > 0.0)) {
        out.regime = Regime::non_stationary_positive;
        return out;
    }
    const auto [lo, hi] = slope_window(params, lambda);
    if (slope < lo) {
        out.regime = Regime::non_stationary_small;
        return out;
    }
    if (slope > hi) {
        out.regime = Regime::non_stationary_large;
        return out;
    }
    const double lam = lambda.value();
    auto g = [&](double r) { return eval_m_derivative(params, lam * r, 1) - slope; };
    double a = 0.5, b = 2.0;
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0) {
            a = b = mid;
            break;
        }
        if ((gm > 0.0) == (ga > 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    out.regime = Regime::stationary;
    out.stationary_r = 0.5 * (a + b);
    return out;
}

double tcond_threshold(const SymbolParams& params, DyadicScale lambda, const KernelConfig& cfg) {
    const double lam = lambda.value();
    const double sb = std::sqrt(static_cast<double>(params.beta()));
    return cfg.tcond_factor / (std::sqrt(lam) * bracket(sb * lam));
}

SupResult sup_scan(int d, const SymbolParams& params, DyadicScale lambda, double t,
                   const KernelConfig& cfg) {
    if (!(t >= tcond_threshold(params, lambda, cfg)))
        throw DomainError("sup_scan: t below the large-time threshold");
    const double lam = lambda.value();
    const double sb = std::sqrt(static_cast<double>(params.beta()));
    const double center = bracket(sb * lam) / std::sqrt(bracket(lam)) * t;
    const double half = std::exp2(0.5 * cfg.scan_octaves);
    const auto [mlo, mhi] = slope_window(params, lambda);
    const double x_lo = std::min(center / half, t * mlo / std::sqrt(2.0));
    const double x_hi = std::max(center * half, t * mhi * std::sqrt(2.0));

    KernelIntegrator integ = make_integrator(d, params, lambda, t, cfg);
    integ.prepare(x_hi);

    const int n = cfg.coarse_points;
    std::vector<double> xs;
    xs.push_back(0.0);
    for (int i = 0; i < n; ++i) xs.push_back(x_lo + (x_hi - x_lo) * i / (n - 1));
    auto magnitude = [&](std::size_t i) { return std::abs(integ.eval(xs[i]).value); };
    const auto mags = cfg.parallel ? kernels::map_parallel(xs.size(), magnitude)
                                   : kernels::map_serial(xs.size(), magnitude);

    const auto best = static_cast<std::size_t>(std::max_element(mags.begin(), mags.end()) - mags.begin());
    SupResult res;
    res.sup = mags[best];
    res.argmax_radius = xs[best];
    res.evaluations = static_cast<int>(xs.size());

    // Golden-section refinement on the bracket around the coarse maximum.
    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    auto f = [&](double x) {
        ++res.evaluations;
        const double v = std::abs(integ.eval(x).value);
        if (v > res.sup) {
            res.sup = v;
            res.argmax_radius = x;
        }
        return v;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), e = a + inv_phi * (b - a);
    double fc = f(c), fe = f(e);
    const double floor = cfg.golden_rel_tol * (x_hi - x_lo) * 1e-3;
    while (b - a > std::max(cfg.golden_rel_tol * std::abs(0.5 * (a + b)), floor)) {
        if (fc > fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = f(e);
        }
    }
    return res;
}

DecayFit decay_fit(int d, const SymbolParams& params, DyadicScale lambda, std::span<const double> t_list,
                   const KernelConfig& cfg) {
    if (t_list.size() < 8) throw DomainError("decay_fit: at least 8 times required");
    for (double t : t_list)
        if (!(t >= tcond_threshold(params, lambda, cfg)))
            throw DomainError("decay_fit: t below the large-time threshold");
    KernelConfig inner = cfg;
    inner.parallel = false;
    auto sample = [&](std::size_t i) {
        DecayPoint p;
        p.t = t_list[i];
        try {
            p.sup = sup_scan(d, params, lambda, p.t, inner).sup;
            p.resolved = true;
        } catch (const Unresolved&) {
            p.resolved = false;
        }
        return p;
    };
    DecayFit fit;
    fit.points = cfg.parallel ? kernels::map_parallel(t_list.size(), sample)
                              : kernels::map_serial(t_list.size(), sample);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& p : fit.points) {
        if (!p.resolved) continue;
        const double x = std::log(p.t), y = std::log(p.sup);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 8) throw Unresolved("decay_fit: fewer than 8 resolved samples");
    fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / count;
    return fit;
}

double normalized_sup(int d, const SymbolParams& params, DyadicScale lambda, double t, double sup) {
    return sup * std::pow(t, 0.5 * d) / c_coeff(params, d, lambda);
}

}  // namespace wbd

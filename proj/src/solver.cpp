#include "wbd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wbd/error.hpp"
#include "wbd/fft.hpp"
#include "wbd/kernels.hpp"

namespace wbd {

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver: dt must be positive");
    if (!(T >= dt)) throw ConfigError("solver: T must be at least dt");
    if (frame_every < 1) throw ConfigError("solver: frame_every must be >= 1");
    if (!(blowup_ceiling > 0.0)) throw ConfigError("solver: blowup_ceiling must be positive");
}

std::string_view to_string(Integrator integrator) {
    return integrator == Integrator::exp_rk4 ? "exp_rk4" : "strang";
}

Integrator integrator_from_string(std::string_view name) {
    if (name == "exp_rk4") return Integrator::exp_rk4;
    if (name == "strang") return Integrator::strang;
    throw ConfigError("unknown integrator '" + std::string(name) + "'");
}

std::string_view to_string(NonlinearityForm form) {
    return form == NonlinearityForm::derived ? "derived" : "as_written";
}

NonlinearityForm nonlinearity_form_from_string(std::string_view name) {
    if (name == "derived") return NonlinearityForm::derived;
    if (name == "as_written") return NonlinearityForm::as_written;
    throw ConfigError("unknown nonlinearity form '" + std::string(name) + "'");
}

namespace {

const SymbolParams kGravity(0);

double coefficient_max(const SpectralField& f) { return kernels::max_abs(f.coeffs()); }

// d_a f for a scalar field (i xi_a times the coefficient).
SpectralField partial(const SpectralField& f, int axis) {
    const auto& g = f.grid();
    SpectralField out = f;
    auto c = out.coeffs();
    for (std::size_t i = 0; i < g.size(); ++i) c[i] *= cplx(0.0, g.xi(i)[axis]);
    return out;
}

SpectralField product(const SpectralField& a, int ca, const SpectralField& b, int cb) {
    auto x = a.to_physical(ca);
    const auto y = b.to_physical(cb);
    kernels::product(x, y, x);
    return SpectralField::from_physical(a.grid(), x);
}

void check_finite(const SolverState& s, double last_valid) {
    for (const auto* f : {&s.u_plus, &s.u_minus})
        for (const cplx& c : f->coeffs())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw BlowUp("solver: non-finite coefficients", last_valid);
}

struct Pair {
    SpectralField p;
    SpectralField m;
};

Pair operator+(const Pair& a, const Pair& b) { return {a.p + b.p, a.m + b.m}; }
Pair operator*(double h, const Pair& a) { return {cplx(h) * a.p, cplx(h) * a.m}; }

Pair linear(const Pair& a, double h) {
    return {propagate(a.p, kGravity, Sign::plus, h), propagate(a.m, kGravity, Sign::minus, h)};
}

// -i B^+- : the right-hand side of d_t u_+- after removing the linear part.
Pair forcing(const Pair& u, const SolverConfig& cfg) {
    auto [bp, bm] = nonlinearity(SolverState{0.0, u.p, u.m}, cfg.dealias, cfg.form);
    return {cplx(0.0, -1.0) * bp, cplx(0.0, -1.0) * bm};
}

// Lawson (integrating-factor) RK4 over h.
Pair lawson_rk4(const Pair& u, double h, const SolverConfig& cfg) {
    const Pair k1 = forcing(u, cfg);
    const Pair k2 = forcing(linear(u + (0.5 * h) * k1, 0.5 * h), cfg);
    const Pair k3 = forcing(linear(u, 0.5 * h) + (0.5 * h) * k2, cfg);
    const Pair k4 = forcing(linear(u, h) + h * linear(k3, 0.5 * h), cfg);
    const Pair mid = linear(k2 + k3, 0.5 * h);
    return linear(u + (h / 6.0) * k1, h) + (h / 3.0) * mid + (h / 6.0) * k4;
}

// Classical RK4 for the nonlinear part alone.
Pair plain_rk4(const Pair& u, double h, const SolverConfig& cfg) {
    const Pair k1 = forcing(u, cfg);
    const Pair k2 = forcing(u + (0.5 * h) * k1, cfg);
    const Pair k3 = forcing(u + (0.5 * h) * k2, cfg);
    const Pair k4 = forcing(u + h * k3, cfg);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SolverState advance(const SolverState& s, double h, const SolverConfig& cfg) {
    Pair u{s.u_plus, s.u_minus};
    if (!cfg.nonlinear) {
        u = linear(u, h);
    } else if (cfg.integrator == Integrator::exp_rk4) {
        u = lawson_rk4(u, h, cfg);
    } else {
        u = linear(plain_rk4(linear(u, 0.5 * h), h, cfg), 0.5 * h);
    }
    SolverState out{s.t + h, std::move(u.p), std::move(u.m)};
    check_finite(out, s.t);
    return out;
}

long step_count(const SolverConfig& cfg) { return std::max(1L, std::lround(cfg.T / cfg.dt)); }

void check_state(const SolverState& s) {
    if (s.u_plus.components() != 1 || s.u_minus.components() != 1)
        throw DomainError("solver: u_+- must be scalar fields");
    if (!(s.u_plus.grid() == s.u_minus.grid())) throw DomainError("solver: u_+ and u_- grids differ");
}

}  // namespace

double curl_defect(const SpectralField& v) {
    if (v.grid().dim() == 1) return 0.0;
    const double norm = v.l2_norm();
    if (norm == 0.0) return 0.0;
    const SpectralField curl = partial(v.extract(1), 0) - partial(v.extract(0), 1);
    return curl.l2_norm() / std::max(apply_multiplier(v, Multiplier::abs_D()).l2_norm(), 1e-300);
}

SolverState to_diagonal(const PhysicalState& p) {
    const auto& g = p.eta.grid();
    if (p.eta.components() != 1) throw DomainError("to_diagonal: eta must be scalar");
    if (p.v.components() != g.dim() || !(p.v.grid() == g))
        throw DomainError("to_diagonal: v must have d components on the eta grid");
    if (curl_defect(p.v) > 1e-8) throw DomainError("to_diagonal: v is not curl-free");
    const double vmax = coefficient_max(p.v);
    for (int c = 0; c < g.dim(); ++c)
        if (std::abs(p.v.component(c)[0]) > 1e-8 * vmax) throw DomainError("to_diagonal: v has nonzero mean");
    if (p.eta.conjugate_symmetry_defect() > 1e-8 * std::max(1.0, coefficient_max(p.eta)) ||
        p.v.conjugate_symmetry_defect() > 1e-8 * std::max(1.0, vmax))
        throw DomainError("to_diagonal: eta and v must be real");

    const SpectralField half_eta = cplx(0.5) * p.eta;
    SpectralField rv = apply_multiplier(riesz_divergence(p.v), Multiplier::sqrt_K());
    // Divide by sqrt K: apply 1/sqrt K as sqrt K / K.
    {
        auto c = rv.coeffs();
        for (std::size_t i = 0; i < g.size(); ++i) c[i] /= symbol_K(g.xi_norm(i));
    }
    const SpectralField w = cplx(0.0, 0.5) * rv;
    return {p.t, half_eta - w, half_eta + w};
}

PhysicalState from_diagonal(const SolverState& s) {
    check_state(s);
    SpectralField eta = s.u_plus + s.u_minus;
    SpectralField v = riesz_gradient(apply_multiplier(s.u_plus - s.u_minus, Multiplier::sqrt_K()));
    v *= cplx(0.0, -1.0);
    return {s.t, std::move(eta), std::move(v)};
}

std::pair<SpectralField, SpectralField> nonlinearity(const SolverState& s, bool dealias_on, NonlinearityForm form) {
    check_state(s);
    const auto& g = s.u_plus.grid();
    const int d = g.dim();
    SpectralField up = s.u_plus, um = s.u_minus;
    if (dealias_on) {
        dealias(up);
        dealias(um);
    }
    const SpectralField sum = up + um;
    const SpectralField a = riesz_gradient(apply_multiplier(up - um, Multiplier::sqrt_K()));

    std::vector<SpectralField> flux;
    for (int c = 0; c < d; ++c) flux.push_back(product(sum, 0, a, c));
    SpectralField transport =
        apply_multiplier(apply_multiplier(riesz_divergence(stack(flux)), Multiplier::K()), Multiplier::abs_D());

    std::vector<cplx> modulus(g.size(), 0.0);
    for (int c = 0; c < d; ++c) {
        const auto pa = a.to_physical(c);
        for (std::size_t i = 0; i < g.size(); ++i) modulus[i] += std::norm(pa[i]);
    }
    SpectralField energy = apply_multiplier(
        apply_multiplier(SpectralField::from_physical(g, modulus), Multiplier::sqrt_K()), Multiplier::abs_D());

    const double c1 = form == NonlinearityForm::derived ? -0.5 : 0.5;
    transport *= cplx(c1);
    energy *= cplx(0.25);
    SpectralField bp = transport + energy;
    SpectralField bm = transport - energy;
    if (dealias_on) {
        dealias(bp);
        dealias(bm);
    }
    return {std::move(bp), std::move(bm)};
}

SolverState step(const SolverState& s, const SolverConfig& cfg) {
    cfg.validate();
    check_state(s);
    return advance(s, cfg.dt, cfg);
}

double sobolev_norm(const SpectralField& f, double s) {
    return apply_multiplier(f, Multiplier::bracket(s)).l2_norm();
}

double data_size(const SolverState& s, double sobolev_index) {
    return sobolev_norm(s.u_plus, sobolev_index) + sobolev_norm(s.u_minus, sobolev_index);
}

Diagnostics diagnose(const SolverState& s, double sobolev_index) {
    const PhysicalState p = from_diagonal(s);
    Diagnostics out;
    out.t = s.t;
    out.hs_eta = sobolev_norm(p.eta, sobolev_index);
    out.hs_v = sobolev_norm(p.v, sobolev_index + 0.5);
    out.tail_mass = std::max(tail_mass(p.eta), tail_mass(p.v));
    out.curl_defect = curl_defect(p.v);
    out.reality_defect = std::max(p.eta.conjugate_symmetry_defect(), p.v.conjugate_symmetry_defect());
    out.size = data_size(s, sobolev_index);
    return out;
}

RunResult run(const PhysicalState& p0, const SolverConfig& cfg) { return run(to_diagonal(p0), cfg); }

RunResult run(const SolverState& s0, const SolverConfig& cfg) {
    cfg.validate();
    check_state(s0);
    const long steps = step_count(cfg);
    const double h = cfg.T / static_cast<double>(steps);
    RunResult res{{}, {}, s0, std::nullopt};
    auto record = [&](const SolverState& s) {
        res.diagnostics.push_back(diagnose(s, cfg.s));
        if (cfg.keep_frames) res.frames.push_back(s);
    };
    record(s0);
    SolverState cur = s0;
    for (long n = 1; n <= steps; ++n) {
        try {
            SolverState next = advance(cur, h, cfg);
            if (!(data_size(next, cfg.s) <= cfg.blowup_ceiling)) throw BlowUp("solver: norm above ceiling", cur.t);
            cur = std::move(next);
        } catch (const BlowUp& e) {
            res.blowup_time = e.last_valid_time();
            break;
        }
        if (n % cfg.frame_every == 0 || n == steps) record(cur);
    }
    res.final_state = cur;
    return res;
}

std::optional<double> validity_horizon(const SolverState& s0, const SolverConfig& cfg, double factor) {
    cfg.validate();
    check_state(s0);
    const long steps = step_count(cfg);
    const double h = cfg.T / static_cast<double>(steps);
    const double target = factor * data_size(s0, cfg.s);
    double prev = data_size(s0, cfg.s);
    SolverState cur = s0;
    for (long n = 1; n <= steps; ++n) {
        try {
            cur = advance(cur, h, cfg);
        } catch (const BlowUp& e) {
            return e.last_valid_time();
        }
        const double size = data_size(cur, cfg.s);
        if (!(size < target)) {
            if (!std::isfinite(size)) return cur.t - h;
            return cur.t - h + h * (target - prev) / (size - prev);
        }
        prev = size;
    }
    return std::nullopt;
}

std::vector<HorizonPoint> d0_scan(const SolverState& shape, std::span<const double> d0_list,
                                  const SolverConfig& cfg, double factor) {
    const double base = data_size(shape, cfg.s);
    if (!(base > 0.0)) throw DomainError("d0_scan: shape has zero size");
    return kernels::map_parallel(d0_list.size(), [&](std::size_t i) {
        const cplx scale(d0_list[i] / base);
        const SolverState s0{shape.t, scale * shape.u_plus, scale * shape.u_minus};
        return HorizonPoint{d0_list[i], validity_horizon(s0, cfg, factor)};
    });
}

namespace {

std::vector<double> coordinate(const GridSpec& g, int axis) {
    std::vector<double> x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t idx = g.dim() == 1 ? i : (axis == 0 ? i / g.n() : i % g.n());
        x[i] = g.spacing() * static_cast<double>(idx);
    }
    return x;
}

SpectralField real_field(const GridSpec& g, const std::vector<double>& values) {
    std::vector<cplx> c(values.begin(), values.end());
    SpectralField f = SpectralField::from_physical(g, c);
    // Drop Nyquist content so the field is exactly representable by the
    // odd multipliers, then restore exact conjugate symmetry.
    auto coeffs = f.coeffs();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.wavevector(i);
        if (k[0] == -g.n() / 2 || k[1] == -g.n() / 2) coeffs[i] = 0.0;
    }
    SpectralField sym = f;
    auto s = sym.coeffs();
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = 0.5 * (coeffs[i] + std::conj(coeffs[g.mirror(i)]));
    return sym;
}

SpectralField gradient(const SpectralField& phi) {
    std::vector<SpectralField> parts;
    for (int a = 0; a < phi.grid().dim(); ++a) parts.push_back(partial(phi, a));
    return stack(parts);
}

}  // namespace

PhysicalState make_initial_data(const GridSpec& g, std::string_view name, double amplitude, std::uint64_t seed) {
    const int d = g.dim();
    const double L = g.length();
    std::vector<double> r2(g.size(), 0.0);
    for (int a = 0; a < d; ++a) {
        const auto x = coordinate(g, a);
        for (std::size_t i = 0; i < g.size(); ++i) r2[i] += (x[i] - 0.5 * L) * (x[i] - 0.5 * L);
    }
    const double width = L / 16.0;
    std::vector<double> eta(g.size(), 0.0), phi(g.size(), 0.0);
    if (name == "zero") {
    } else if (name == "bump") {
        for (std::size_t i = 0; i < g.size(); ++i) eta[i] = amplitude * std::exp(-r2[i] / (width * width));
    } else if (name == "packet") {
        // Carrier near |xi| = 2 along axis 0, moving in the +x_1 direction.
        const double k0 = g.fundamental() * std::max(1.0, std::round(2.0 / g.fundamental()));
        const auto x = coordinate(g, 0);
        const double w = L / 12.0;
        const double speed = eval_m(kGravity, k0) / k0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double env = amplitude * std::exp(-r2[i] / (w * w));
            eta[i] = env * std::cos(k0 * x[i]);
            phi[i] = speed * env * std::sin(k0 * x[i]) / k0;
        }
    } else if (name == "random") {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        for (auto* target : {&eta, &phi}) {
            SpectralField f(g);
            auto c = f.coeffs();
            const double cutoff = 8.0 * g.fundamental();
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double re = normal(rng);
                const double im = normal(rng);
                const double r = g.xi_norm(i) / cutoff;
                c[i] = cplx(re, im) * std::exp(-r * r);
            }
            c[0] = 0.0;
            const auto phys = f.to_physical();
            double peak = 0.0;
            for (const auto& z : phys) peak = std::max(peak, std::abs(z.real()));
            for (std::size_t i = 0; i < g.size(); ++i) (*target)[i] = amplitude * phys[i].real() / peak;
        }
        for (auto& p : phi) p /= 4.0 * g.fundamental();
    } else {
        throw ConfigError("unknown initial data '" + std::string(name) + "'");
    }
    SpectralField eta_f = real_field(g, eta);
    SpectralField phi_f = real_field(g, phi);
    dealias(eta_f);
    dealias(phi_f);
    SpectralField v = gradient(phi_f);
    for (int c = 0; c < d; ++c) v.component(c)[0] = 0.0;
    return {0.0, std::move(eta_f), std::move(v)};
}

}  // namespace wbd

#include "wbd/strichartz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "wbd/dyadic.hpp"
#include "wbd/error.hpp"
#include "wbd/kernels.hpp"

namespace wbd {

Exponent::Exponent(std::int64_t num, std::int64_t den) {
    if (num <= 0 || den <= 0) throw DomainError("Exponent: numerator and denominator must be positive");
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Exponent Exponent::infinity() { return Exponent(); }

Exponent Exponent::parse(std::string_view text) {
    if (text == "inf" || text == "infinity") return infinity();
    auto read = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw DomainError("Exponent: cannot parse '" + std::string(text) + "'");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Exponent(read(text));
    return Exponent(read(text.substr(0, slash)), read(text.substr(slash + 1)));
}

double Exponent::value() const noexcept {
    return is_infinite() ? kInf : static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Exponent::to_string() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

bool admissible(int d, Exponent q, Exponent r) {
    if (d < 1) return false;
    // q > 2  <=>  1/q < 1/2 ;  r >= 2  <=>  1/r <= 1/2.
    if (!(2 * q.inv_num() < q.inv_den())) return false;
    if (!(2 * r.inv_num() <= r.inv_den())) return false;
    // 2/q + d/r = d/2 with 1/q = a/b, 1/r = c/e:  2 (2a e + d c b) = d b e.
    using i128 = __int128;
    const i128 a = q.inv_num(), b = q.inv_den(), c = r.inv_num(), e = r.inv_den();
    return 2 * (2 * a * e + d * c * b) == static_cast<i128>(d) * b * e;
}

Exponent paired_space_exponent(int d, Exponent q) {
    if (q.is_infinite()) return Exponent(2);
    // q = n/m:  r = 2 n d / (n d - 4 m).
    const std::int64_t n = q.inv_den(), m = q.inv_num();
    const std::int64_t den = n * d - 4 * m;
    if (den <= 0) throw DomainError("paired_space_exponent: requires q d > 4");
    return Exponent(2 * n * d, den);
}

double strichartz_prefactor(const SymbolParams& params, int d, DyadicScale lambda, Exponent q) {
    if (q.is_infinite()) return 1.0;
    return std::pow(c_coeff(params, d, lambda), 2.0 / (q.value() * d));
}

double beta0_prefactor_ratio(int d, DyadicScale lambda, Exponent q) {
    const double qv = q.value();
    return strichartz_prefactor(SymbolParams(0), d, lambda, q) /
           std::pow(bracket(lambda.value()), 3.0 / (2.0 * qv));
}

GridSpec strichartz_grid(int d, DyadicScale lambda) {
    if (d == 1) return GridSpec(1, 128, 32.0 * std::numbers::pi / lambda.value());
    return GridSpec(2, 64, 16.0 * std::numbers::pi / lambda.value());
}

std::vector<SpectralField> random_localized_samples(const GridSpec& grid, DyadicScale lambda,
                                                    std::size_t count, std::uint64_t seed) {
    const double lam = lambda.value();
    auto make = [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        SpectralField f(grid);
        auto c = f.coeffs();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double r = grid.xi_norm(k);
            if (r >= 0.5 * lam && r <= 2.0 * lam) {
                const double re = normal(rng);
                c[k] = cplx(re, normal(rng));
            }
        }
        return project(f, lambda);
    };
    return kernels::map_parallel(count, make);
}

namespace {

std::vector<double> time_nodes(double T, std::size_t n_t) {
    std::vector<double> t(n_t);
    for (std::size_t i = 0; i < n_t; ++i) t[i] = T * static_cast<double>(i) / static_cast<double>(n_t - 1);
    return t;
}

std::vector<SpectralField> free_trajectory(const SpectralField& f, const SymbolParams& params, double T,
                                           std::size_t n_t) {
    std::vector<SpectralField> out;
    out.reserve(n_t);
    for (double t : time_nodes(T, n_t)) out.push_back(propagate(f, params, Sign::plus, t));
    return out;
}

void check_time_grid(double T, std::size_t n_t) {
    if (!(T > 0.0)) throw DomainError("T must be positive");
    if (n_t < 2) throw DomainError("at least two time samples required");
}

// Pointwise products of physical samples, returned as a scalar field.
SpectralField multiply(const SpectralField& a, int ca, const SpectralField& b, int cb) {
    auto x = a.to_physical(ca);
    const auto y = b.to_physical(cb);
    kernels::product(x, y, x);
    return SpectralField::from_physical(a.grid(), x);
}

SpectralField bilinear_core(int variant, const SpectralField& u, const SpectralField& v) {
    if (variant != 1 && variant != 2) throw DomainError("bilinear variant must be 1 or 2");
    if (u.components() != 1 || v.components() != 1) throw DomainError("bilinear inputs must be scalar");
    if (!(u.grid() == v.grid())) throw DomainError("bilinear inputs on different grids");
    const int d = u.grid().dim();
    const auto rv = riesz_gradient(apply_multiplier(v, Multiplier::sqrt_K()));
    if (variant == 1) {
        std::vector<SpectralField> parts;
        for (int c = 0; c < d; ++c) parts.push_back(multiply(u, 0, rv, c));
        return riesz_divergence(stack(parts));
    }
    const auto ru = riesz_gradient(apply_multiplier(u, Multiplier::sqrt_K()));
    SpectralField dot = multiply(ru, 0, rv, 0);
    for (int c = 1; c < d; ++c) dot += multiply(ru, c, rv, c);
    return dot;
}

SpectralField outer_multiplier(int variant, SpectralField f) {
    f = apply_multiplier(f, Multiplier::abs_D());
    return apply_multiplier(f, variant == 1 ? Multiplier::K() : Multiplier::sqrt_K());
}

}  // namespace

double strichartz_ratio_one(const StrichartzSetup& s, const SpectralField& sample) {
    if (!admissible(s.d, s.q, s.r)) throw DomainError("strichartz_ratio: exponents not admissible");
    check_time_grid(s.T, s.n_t);
    if (sample.grid().dim() != s.d) throw DomainError("strichartz_ratio: sample dimension mismatch");
    const SymbolParams params(s.beta);
    const auto local = project(sample, s.lambda);
    const double l2 = local.l2_norm();
    if (!(l2 > 0.0)) throw DomainError("strichartz_ratio: sample has no mass in the annulus");
    const auto traj = free_trajectory(local, params, s.T, s.n_t);
    const double num = mixed_norm(traj, {s.q.value(), s.r.value(), s.T, s.n_t});
    return num / (strichartz_prefactor(params, s.d, s.lambda, s.q) * l2);
}

double strichartz_ratio(const StrichartzSetup& s, std::span<const SpectralField> samples) {
    if (samples.empty()) throw DomainError("strichartz_ratio: no samples");
    if (!admissible(s.d, s.q, s.r)) throw DomainError("strichartz_ratio: exponents not admissible");
    const auto ratios =
        kernels::map_parallel(samples.size(), [&](std::size_t i) { return strichartz_ratio_one(s, samples[i]); });
    return *std::max_element(ratios.begin(), ratios.end());
}

bool in_Lambda(DyadicScale l0, DyadicScale l1, DyadicScale l2) {
    std::array<int, 3> j{l0.exponent(), l1.exponent(), l2.exponent()};
    std::sort(j.begin(), j.end());
    return j[2] - j[1] <= 2;
}

GridSpec bilinear_grid(int d, DyadicScale l0, DyadicScale l1, DyadicScale l2) {
    const double lmin = std::min({l0.value(), l1.value(), l2.value()});
    const double fundamental = lmin / 4.0;
    const double top = 2.0 * (l1.value() + l2.value());  // largest product frequency
    int n = 8;
    while (n * fundamental / 2.0 <= 1.05 * top) n *= 2;
    return GridSpec(d, n, 2.0 * std::numbers::pi / fundamental);
}

SpectralField projected_product(int variant, DyadicScale l0, const SpectralField& u, const SpectralField& v) {
    return outer_multiplier(variant, project(bilinear_core(variant, u, v), l0));
}

SpectralField unprojected_product(int variant, const SpectralField& u, const SpectralField& v) {
    return outer_multiplier(variant, bilinear_core(variant, u, v));
}

double x_lambda_surrogate(std::span<const SpectralField> trajectory, DyadicScale lambda, Exponent q,
                          double T) {
    if (trajectory.empty()) throw DomainError("x_lambda_surrogate: empty trajectory");
    const int d = trajectory[0].grid().dim();
    const Exponent r = paired_space_exponent(d, q);
    std::vector<SpectralField> local;
    local.reserve(trajectory.size());
    for (const auto& f : trajectory) local.push_back(project(f, lambda));
    const double energy = mixed_norm(local, {kInf, 2.0, T, local.size()});
    const double strich = mixed_norm(local, {q.value(), r.value(), T, local.size()});
    return std::max(energy, std::pow(bracket(lambda.value()), -3.0 / (2.0 * q.value())) * strich);
}

double bilinear_weight(const BilinearSetup& s) {
    const double q = s.q.value();
    const double b0 = bracket(s.l0.value()), b1 = bracket(s.l1.value()), b2 = bracket(s.l2.value());
    const double common = std::pow(s.T, 1.0 - 1.0 / q) * std::pow(std::min(b1, b2), 0.5 * s.d - 0.5 / q);
    if (s.variant == 1) return common / std::sqrt(b2);
    return common * std::sqrt(b0) / std::sqrt(b1 * b2);
}

double bilinear_ratio_one(const BilinearSetup& s, const SpectralField& u0, const SpectralField& v0) {
    check_time_grid(s.T, s.n_t);
    const SymbolParams params(0);
    const auto u = free_trajectory(project(u0, s.l1), params, s.T, s.n_t);
    const auto v = free_trajectory(project(v0, s.l2), params, s.T, s.n_t);
    std::vector<SpectralField> lhs;
    lhs.reserve(s.n_t);
    for (std::size_t i = 0; i < s.n_t; ++i) lhs.push_back(projected_product(s.variant, s.l0, u[i], v[i]));
    const double num = mixed_norm(lhs, {1.0, 2.0, s.T, s.n_t});
    const double den = bilinear_weight(s) * x_lambda_surrogate(u, s.l1, s.q, s.T) *
                       x_lambda_surrogate(v, s.l2, s.q, s.T);
    if (!(den > 0.0)) throw DomainError("bilinear_ratio: sample has no mass in its annulus");
    return num / den;
}

double bilinear_ratio(const BilinearSetup& s, std::span<const SpectralField> u_samples,
                      std::span<const SpectralField> v_samples) {
    if (!in_Lambda(s.l0, s.l1, s.l2)) throw DomainError("bilinear_ratio: scales outside Lambda");
    if (s.variant != 1 && s.variant != 2) throw DomainError("bilinear variant must be 1 or 2");
    if (u_samples.empty() || u_samples.size() != v_samples.size())
        throw DomainError("bilinear_ratio: need equally many nonempty u and v samples");
    paired_space_exponent(s.d, s.q);
    const auto ratios = kernels::map_parallel(
        u_samples.size(), [&](std::size_t i) { return bilinear_ratio_one(s, u_samples[i], v_samples[i]); });
    return *std::max_element(ratios.begin(), ratios.end());
}

void write_ratio_csv(std::ostream& out, std::span<const RatioRow> rows) {
    out << "d,beta,lambda,q,r,T,ratio,n_samples\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.15g", x);
        return std::string(buf);
    };
    for (const auto& row : rows) {
        std::string lambdas;
        for (std::size_t i = 0; i < row.lambdas.size(); ++i) lambdas += (i ? ";" : "") + num(row.lambdas[i]);
        out << row.d << ',' << row.beta << ',' << lambdas << ',' << row.q.to_string() << ','
            << row.r.to_string() << ',' << num(row.T) << ',' << num(row.ratio) << ',' << row.n_samples << '\n';
    }
}

}  // namespace wbd

#include "wbd/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "wbd/error.hpp"
#include "wbd/fft.hpp"
#include "wbd/kernels.hpp"

namespace wbd {

GridSpec::GridSpec(int d, int n, double length) : d_(d), n_(n), length_(length), size_(0) {
    if (d != 1 && d != 2) throw DomainError("GridSpec: d must be 1 or 2");
    if (n < 8 || (n & (n - 1)) != 0) throw DomainError("GridSpec: n must be a power of two >= 8");
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("GridSpec: length must be positive");
    size_ = d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), d_); }

double GridSpec::fundamental() const noexcept { return 2.0 * std::numbers::pi / length_; }

std::array<int, 2> GridSpec::wavevector(std::size_t flat) const noexcept {
    if (d_ == 1) return {wavenumber(static_cast<int>(flat)), 0};
    const int i0 = static_cast<int>(flat / n_);
    const int i1 = static_cast<int>(flat % n_);
    return {wavenumber(i0), wavenumber(i1)};
}

std::size_t GridSpec::flat_index(std::array<int, 2> k) const noexcept {
    if (d_ == 1) return static_cast<std::size_t>(index_of(k[0]));
    return static_cast<std::size_t>(index_of(k[0])) * n_ + index_of(k[1]);
}

std::array<double, 2> GridSpec::xi(std::size_t flat) const noexcept {
    const auto k = wavevector(flat);
    const double f = fundamental();
    return {f * k[0], f * k[1]};
}

double GridSpec::xi_norm(std::size_t flat) const noexcept {
    const auto x = xi(flat);
    return std::hypot(x[0], x[1]);
}

std::size_t GridSpec::mirror(std::size_t flat) const noexcept {
    auto k = wavevector(flat);
    // -(-n/2) aliases to -n/2 itself.
    for (int a = 0; a < d_; ++a) k[a] = k[a] == -n_ / 2 ? k[a] : -k[a];
    return flat_index(k);
}

SpectralField::SpectralField(GridSpec grid, int components)
    : grid_(grid), components_(components), data_() {
    if (components < 1) throw DomainError("SpectralField: components must be >= 1");
    data_.assign(grid_.size() * components_, cplx{});
}

SpectralField SpectralField::from_physical(const GridSpec& grid, std::span<const cplx> values,
                                           int components) {
    SpectralField f(grid, components);
    if (values.size() != grid.size() * components)
        throw DomainError("from_physical: sample count does not match grid");
    for (int c = 0; c < components; ++c)
        fft::forward(grid, values.subspan(c * grid.size(), grid.size()), f.component(c));
    return f;
}

std::span<cplx> SpectralField::component(int c) {
    if (c < 0 || c >= components_) throw DomainError("SpectralField: component out of range");
    return std::span<cplx>(data_).subspan(c * grid_.size(), grid_.size());
}

std::span<const cplx> SpectralField::component(int c) const {
    if (c < 0 || c >= components_) throw DomainError("SpectralField: component out of range");
    return std::span<const cplx>(data_).subspan(c * grid_.size(), grid_.size());
}

cplx& SpectralField::at(std::array<int, 2> k, int c) { return component(c)[grid_.flat_index(k)]; }

cplx SpectralField::at(std::array<int, 2> k, int c) const {
    return component(c)[grid_.flat_index(k)];
}

std::vector<cplx> SpectralField::to_physical(int c) const {
    std::vector<cplx> out(grid_.size());
    fft::inverse(grid_, component(c), out);
    return out;
}

SpectralField SpectralField::extract(int c) const {
    SpectralField f(grid_, 1);
    auto src = component(c);
    std::copy(src.begin(), src.end(), f.data_.begin());
    return f;
}

double SpectralField::l2_norm() const {
    return std::sqrt(kernels::sum_abs_pow(data_, 2.0) * std::pow(grid_.length(), grid_.dim()));
}

double SpectralField::conjugate_symmetry_defect() const {
    double defect = 0.0;
    for (int c = 0; c < components_; ++c) {
        auto v = component(c);
        for (std::size_t i = 0; i < v.size(); ++i)
            defect = std::max(defect, std::abs(v[grid_.mirror(i)] - std::conj(v[i])));
    }
    return defect;
}

void SpectralField::check_compatible(const SpectralField& o) const {
    if (!(grid_ == o.grid_) || components_ != o.components_)
        throw DomainError("SpectralField: grid or component mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

SpectralField stack(std::span<const SpectralField> parts) {
    if (parts.empty()) throw DomainError("stack: no parts");
    int total = 0;
    for (const auto& p : parts) {
        if (!(p.grid() == parts[0].grid())) throw DomainError("stack: grid mismatch");
        total += p.components();
    }
    SpectralField out(parts[0].grid(), total);
    auto dst = out.coeffs().begin();
    for (const auto& p : parts) dst = std::copy(p.coeffs().begin(), p.coeffs().end(), dst);
    return out;
}

double symbol_K(double r) {
    if (r == 0.0) return 1.0;
    if (r < 1e-4) return 1.0 - r * r / 3.0;
    return std::tanh(r) / r;
}

Multiplier Multiplier::parse(std::string_view name) {
    if (name == "m_beta0") return m(0);
    if (name == "m_beta1") return m(1);
    if (name == "L_beta0") return L(0);
    if (name == "L_beta1") return L(1);
    if (name == "K") return K();
    if (name == "sqrtK") return sqrt_K();
    if (name == "absD") return abs_D();
    if (name == "R1") return riesz(0);
    if (name == "R2") return riesz(1);
    constexpr std::string_view prefix = "bracket^";
    if (name.starts_with(prefix)) {
        const auto rest = name.substr(prefix.size());
        double s = 0.0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), s);
        if (ec == std::errc() && ptr == rest.data() + rest.size()) return bracket(s);
    }
    throw DomainError("unknown multiplier: " + std::string(name));
}

cplx Multiplier::value(std::array<double, 2> xi, double norm) const {
    switch (kind) {
        case SymbolKind::m: return eval_m(SymbolParams(beta), norm);
        case SymbolKind::L: return std::sqrt((1.0 + beta * norm * norm) * symbol_K(norm));
        case SymbolKind::K: return symbol_K(norm);
        case SymbolKind::sqrt_K: return std::sqrt(symbol_K(norm));
        case SymbolKind::abs_D: return norm;
        case SymbolKind::bracket_pow: return std::pow(1.0 + norm * norm, 0.5 * power);
        case SymbolKind::riesz:
            if (norm == 0.0) return 0.0;
            return cplx(0.0, xi[axis] / norm);
    }
    return 0.0;
}

namespace {

using TableKey = std::tuple<int, int, double, int, int, double, int>;

// Symbol values on a grid, computed once per (grid, multiplier).
std::shared_ptr<const std::vector<cplx>> multiplier_table(const GridSpec& g, const Multiplier& symbol) {
    static std::mutex mutex;
    static std::map<TableKey, std::shared_ptr<const std::vector<cplx>>> cache;
    const TableKey key{g.dim(), g.n(), g.length(), static_cast<int>(symbol.kind), symbol.beta, symbol.power,
                       symbol.axis};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto factor = std::make_shared<std::vector<cplx>>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) (*factor)[i] = symbol.value(g.xi(i), g.xi_norm(i));
    // Odd symbols vanish on the Nyquist plane of their axis so that real
    // fields stay real.
    if (symbol.kind == SymbolKind::riesz)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.wavevector(i)[symbol.axis] == -g.n() / 2) (*factor)[i] = 0.0;
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(factor)).first->second;
}

}  // namespace

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& symbol) {
    const auto& g = field.grid();
    if (symbol.kind == SymbolKind::riesz && (symbol.axis < 0 || symbol.axis >= g.dim()))
        throw DomainError("apply_multiplier: Riesz axis out of range");
    const auto factor = multiplier_table(g, symbol);
    SpectralField out = field;
    for (int c = 0; c < out.components(); ++c) kernels::scale(out.component(c), *factor);
    return out;
}

SpectralField riesz_gradient(const SpectralField& scalar) {
    if (scalar.components() != 1) throw DomainError("riesz_gradient: scalar field expected");
    std::vector<SpectralField> parts;
    for (int a = 0; a < scalar.grid().dim(); ++a)
        parts.push_back(apply_multiplier(scalar, Multiplier::riesz(a)));
    return stack(parts);
}

SpectralField riesz_divergence(const SpectralField& vector) {
    const int d = vector.grid().dim();
    if (vector.components() != d) throw DomainError("riesz_divergence: d-component field expected");
    SpectralField out(vector.grid(), 1);
    for (int a = 0; a < d; ++a) out += apply_multiplier(vector.extract(a), Multiplier::riesz(a));
    return out;
}

SpectralField propagate(const SpectralField& field, const SymbolParams& params, Sign sign, double t) {
    const auto& g = field.grid();
    std::vector<cplx> factor(g.size());
    const double s = -static_cast<double>(static_cast<int>(sign)) * t;
    const auto m = multiplier_table(g, Multiplier::m(params.beta()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double phase = s * (*m)[i].real();
        factor[i] = cplx(std::cos(phase), std::sin(phase));
    }
    SpectralField out = field;
    for (int c = 0; c < out.components(); ++c) kernels::scale(out.component(c), factor);
    return out;
}

double lebesgue_norm(const SpectralField& field, double r) {
    if (!(r >= 1.0)) throw DomainError("lebesgue_norm: r must be >= 1");
    double total = 0.0;
    for (int c = 0; c < field.components(); ++c) {
        const auto phys = field.to_physical(c);
        if (std::isinf(r)) {
            total = std::max(total, kernels::max_abs(phys));
        } else {
            total += kernels::sum_abs_pow(phys, r) * field.grid().cell_volume();
        }
    }
    return std::isinf(r) ? total : std::pow(total, 1.0 / r);
}

double mixed_norm(std::span<const SpectralField> trajectory, const MixedNormSpec& spec) {
    if (trajectory.empty() || trajectory.size() != spec.n_t)
        throw DomainError("mixed_norm: trajectory length must equal n_t");
    if (!(spec.T > 0.0)) throw DomainError("mixed_norm: T must be positive");
    for (const auto& f : trajectory)
        if (!(f.grid() == trajectory[0].grid())) throw DomainError("mixed_norm: grid mismatch");
    if (!std::isinf(spec.q) && trajectory.size() < 2)
        throw DomainError("mixed_norm: finite q needs at least two time samples");

    std::vector<double> spatial(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) spatial[i] = lebesgue_norm(trajectory[i], spec.r);
    if (std::isinf(spec.q)) return *std::max_element(spatial.begin(), spatial.end());

    const double dt = spec.T / static_cast<double>(trajectory.size() - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < spatial.size(); ++i) {
        const double w = (i == 0 || i + 1 == spatial.size()) ? 0.5 : 1.0;
        acc += w * std::pow(spatial[i], spec.q);
    }
    return std::pow(acc * dt, 1.0 / spec.q);
}

namespace {

int max_abs_wavenumber(const GridSpec& g, std::size_t flat) {
    const auto k = g.wavevector(flat);
    return std::max(std::abs(k[0]), std::abs(k[1]));
}

}  // namespace

double tail_mass(const SpectralField& field) {
    const auto& g = field.grid();
    double tail = 0.0, total = 0.0;
    for (int c = 0; c < field.components(); ++c) {
        auto v = field.component(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double e = std::norm(v[i]);
            total += e;
            if (4 * max_abs_wavenumber(g, i) > g.n()) tail += e;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

void dealias(SpectralField& field) {
    const auto& g = field.grid();
    for (int c = 0; c < field.components(); ++c) {
        auto v = field.component(c);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (3 * max_abs_wavenumber(g, i) > g.n()) v[i] = 0.0;
    }
}

}  // namespace wbd

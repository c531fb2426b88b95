// Batch driver: one subcommand per experiment, JSON configs in, CSV out.
// Exit codes: 0 pass, 1 acceptance violation, 2 configuration error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wbd/error.hpp"
#include "wbd/field_io.hpp"
#include "wbd/kernel.hpp"
#include "wbd/kernels.hpp"
#include "wbd/solver.hpp"
#include "wbd/strichartz.hpp"
#include "wbd/symbol.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wbd;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

// Output sink: a file when --out is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

json read_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    try {
        json j = json::parse(in);
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

// Overlay `user` onto `defaults`, rejecting keys the defaults do not know.
void merge(json& defaults, const json& user, const std::string& where) {
    for (const auto& [key, value] : user.items()) {
        if (!defaults.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
        if (defaults[key].is_object() && value.is_object())
            merge(defaults[key], value, where + key + ".");
        else
            defaults[key] = value;
    }
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

Exponent get_exponent(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_string()) return Exponent::parse(v.get<std::string>());
    if (v.is_number_integer()) return Exponent(v.get<std::int64_t>());
    throw ConfigError(std::string("config key '") + key + "' must be an integer or a string like \"8/3\"");
}

DyadicScale get_scale(double lambda) {
    try {
        return DyadicScale::from_value(lambda);
    } catch (const DomainError&) {
        throw ConfigError("lambda " + num(lambda) + " is not a power of two");
    }
}

struct Common {
    std::string config;
    std::string out;
    bool dry_run = false;
    int workers = 0;
};

void apply_workers(const Common& c) {
    int workers = c.workers;
    if (workers <= 0)
        if (const char* env = std::getenv("WBD_WORKERS")) workers = std::atoi(env);
    kernels::set_workers(workers);
}

bool dry_run(const Common& c, const json& cfg) {
    if (!c.dry_run) return false;
    std::cout << cfg.dump(2) << "\n";
    return true;
}

// symbol-check

json symbol_defaults() {
    json q = json::array({"m", "m_prime", "m_second"});
    for (int k = 3; k <= 6; ++k) q.push_back({{"name", "m_k"}, {"order", k}});
    for (int k = 0; k <= 5; ++k) q.push_back({{"name", "inv_mprime_k"}, {"order", k}});
    return {{"beta", json::array({0, 1})}, {"quantities", q}, {"grid", {{"lo", 1e-4}, {"hi", 1e4}, {"n", 400}}}};
}

int cmd_symbol_check(const Common& c, const std::optional<std::string>& quantity, const std::optional<int>& beta,
                     const std::optional<int>& order) {
    json cfg = symbol_defaults();
    merge(cfg, read_config(c.config), "");
    if (quantity) {
        const Quantity q = quantity_from_string(*quantity);
        int k = order.value_or(0);
        if (!order && q == Quantity::m_k) k = 3;
        cfg["quantities"] = json::array({json{{"name", *quantity}, {"order", k}}});
    }
    if (beta) cfg["beta"] = json::array({*beta});
    if (dry_run(c, cfg)) return kExitPass;

    const json& g = cfg["grid"];
    const auto grid = log_grid(get<double>(g, "lo"), get<double>(g, "hi"), get<int>(g, "n"));
    Sink sink(c.out);
    auto& out = sink.stream();
    out << "beta,quantity,order,kind,ratio_min,ratio_max,spread,envelope,pass\n";
    bool all = true;
    for (const auto& b : cfg["beta"]) {
        const SymbolParams params(b.get<int>());
        for (const auto& entry : cfg["quantities"]) {
            const std::string name = entry.is_string() ? entry.get<std::string>() : get<std::string>(entry, "name");
            const int k = entry.is_object() && entry.contains("order") ? entry["order"].get<int>() : 0;
            const Quantity q = quantity_from_string(name);
            const auto rep = comparability_scan(params, q, grid, k);
            const bool comparable = rep.kind == ClaimKind::comparable;
            const bool pass = within_envelope(rep);
            all = all && pass;
            out << params.beta() << ',' << name << ',' << k << ',' << (comparable ? "comparable" : "bounded_above")
                << ',' << num(rep.ratio_min) << ',' << num(rep.ratio_max) << ','
                << (comparable ? num(rep.spread()) : "") << ',' << (comparable ? num(10.0) : num(frozen_envelope(q, k)))
                << ',' << (pass ? 1 : 0) << '\n';
        }
    }
    return all ? kExitPass : kExitViolation;
}

// kernel-decay

json kernel_defaults() {
    KernelConfig k;
    return {{"d", 1},
            {"beta", 0},
            {"lambda_list", json::array({0.5, 1.0, 2.0})},
            {"t_list", nullptr},
            {"decade", {{"start_factor", 100.0}, {"end_factor", 1000.0}, {"points", 10}}},
            {"slope_tolerance", 0.1},
            {"kernel",
             {{"nodes_per_panel", k.nodes_per_panel},
              {"min_panels", k.min_panels},
              {"node_cap", k.node_cap},
              {"rel_tol", k.rel_tol},
              {"tcond_factor", k.tcond_factor},
              {"coarse_points", k.coarse_points},
              {"golden_rel_tol", k.golden_rel_tol}}}};
}

int cmd_kernel_decay(const Common& c, bool plot_table, const std::optional<int>& beta) {
    json cfg = kernel_defaults();
    merge(cfg, read_config(c.config), "");
    if (beta) cfg["beta"] = *beta;
    if (dry_run(c, cfg)) return kExitPass;

    const int d = get<int>(cfg, "d");
    if (d < 1 || d > 3) throw ConfigError("kernel-decay: d must be 1, 2 or 3");
    const SymbolParams params(get<int>(cfg, "beta"));
    const auto lambdas = get<std::vector<double>>(cfg, "lambda_list");
    if (lambdas.empty()) throw ConfigError("kernel-decay: lambda_list is empty");
    const json& kc = cfg["kernel"];
    KernelConfig kcfg;
    kcfg.nodes_per_panel = get<int>(kc, "nodes_per_panel");
    kcfg.min_panels = get<int>(kc, "min_panels");
    kcfg.node_cap = get<long>(kc, "node_cap");
    kcfg.rel_tol = get<double>(kc, "rel_tol");
    kcfg.tcond_factor = get<double>(kc, "tcond_factor");
    kcfg.coarse_points = get<int>(kc, "coarse_points");
    kcfg.golden_rel_tol = get<double>(kc, "golden_rel_tol");
    const double tol = get<double>(cfg, "slope_tolerance");

    Sink sink(c.out);
    auto& out = sink.stream();
    std::ostringstream plot;
    plot << "d,beta,lambda,series,t,value\n";
    out << "d,beta,lambda,t,sup,normalized_sup,slope\n";
    bool all = true;
    for (double l : lambdas) {
        const DyadicScale lam = get_scale(l);
        std::vector<double> ts;
        if (cfg["t_list"].is_null()) {
            const json& dec = cfg["decade"];
            const double t0 = tcond_threshold(params, lam, kcfg);
            ts = log_grid(get<double>(dec, "start_factor") * t0, get<double>(dec, "end_factor") * t0,
                          get<int>(dec, "points"));
        } else {
            ts = get<std::vector<double>>(cfg, "t_list");
        }
        if (ts.empty()) throw ConfigError("kernel-decay: t_list is empty");
        const auto fit = decay_fit(d, params, lam, ts, kcfg);
        all = all && std::abs(fit.slope + 0.5 * d) <= tol;
        for (const auto& p : fit.points) {
            const double norm = normalized_sup(d, params, lam, p.t, p.sup);
            out << d << ',' << params.beta() << ',' << num(l) << ',' << num(p.t) << ',' << num(p.sup) << ','
                << num(norm) << ',' << num(fit.slope) << '\n';
            const std::string prefix = std::to_string(d) + ',' + std::to_string(params.beta()) + ',' + num(l) + ',';
            plot << prefix << "sup," << num(p.t) << ',' << num(p.sup) << '\n';
            plot << prefix << "normalized_sup," << num(p.t) << ',' << num(norm) << '\n';
            plot << prefix << "fit," << num(p.t) << ',' << num(std::exp(fit.intercept) * std::pow(p.t, fit.slope))
                 << '\n';
        }
    }
    if (plot_table) {
        const std::string path = c.out.empty() || c.out == "-" ? "kernel_decay_plot.csv"
                                                               : fs::path(c.out).replace_extension().string() + "_plot.csv";
        std::ofstream(path, std::ios::binary) << plot.str();
    }
    return all ? kExitPass : kExitViolation;
}

// strichartz

json strichartz_defaults() {
    return {{"d", 2},          {"beta", 0},     {"q", 4},     {"r", 4},      {"lambda_list", json::array({0.5, 1.0, 2.0})},
            {"T", 1.0},        {"samples", 200}, {"seed", 1}, {"n_t", 33}};
}

int cmd_strichartz(const Common& c) {
    json cfg = strichartz_defaults();
    merge(cfg, read_config(c.config), "");
    if (dry_run(c, cfg)) return kExitPass;

    StrichartzSetup s;
    s.d = get<int>(cfg, "d");
    s.beta = get<int>(cfg, "beta");
    s.q = get_exponent(cfg, "q");
    s.r = get_exponent(cfg, "r");
    s.T = get<double>(cfg, "T");
    s.n_t = get<std::size_t>(cfg, "n_t");
    if (s.d != 1 && s.d != 2) throw ConfigError("strichartz: d must be 1 or 2");
    if (!admissible(s.d, s.q, s.r))
        throw ConfigError("strichartz: (q, r) = (" + s.q.to_string() + ", " + s.r.to_string() + ") is not admissible");
    const auto count = get<std::size_t>(cfg, "samples");
    const auto seed = get<std::uint64_t>(cfg, "seed");
    const auto lambdas = get<std::vector<double>>(cfg, "lambda_list");
    if (lambdas.empty() || count == 0) throw ConfigError("strichartz: need lambdas and samples");

    std::vector<RatioRow> rows;
    for (double l : lambdas) {
        s.lambda = get_scale(l);
        const auto samples = random_localized_samples(strichartz_grid(s.d, s.lambda), s.lambda, count, seed);
        rows.push_back({s.d, s.beta, {l}, s.q, s.r, s.T, strichartz_ratio(s, samples), count});
    }
    Sink sink(c.out);
    write_ratio_csv(sink.stream(), rows);
    return kExitPass;
}

// bilinear

json bilinear_defaults() {
    return {{"variant", 1}, {"d", 2},        {"lambdas", json::array({1.0, 1.0, 1.0})},
            {"q", 4},       {"T", 1.0},      {"samples", 20},
            {"seed", 1},    {"n_t", 33}};
}

int cmd_bilinear(const Common& c) {
    json cfg = bilinear_defaults();
    merge(cfg, read_config(c.config), "");
    if (dry_run(c, cfg)) return kExitPass;

    BilinearSetup s;
    s.variant = get<int>(cfg, "variant");
    s.d = get<int>(cfg, "d");
    s.q = get_exponent(cfg, "q");
    s.T = get<double>(cfg, "T");
    s.n_t = get<std::size_t>(cfg, "n_t");
    const auto ls = get<std::vector<double>>(cfg, "lambdas");
    if (ls.size() != 3) throw ConfigError("bilinear: lambdas must hold (lambda_0, lambda_1, lambda_2)");
    s.l0 = get_scale(ls[0]);
    s.l1 = get_scale(ls[1]);
    s.l2 = get_scale(ls[2]);
    if (s.d != 1 && s.d != 2) throw ConfigError("bilinear: d must be 1 or 2");
    const auto count = get<std::size_t>(cfg, "samples");
    const auto seed = get<std::uint64_t>(cfg, "seed");
    if (count == 0) throw ConfigError("bilinear: samples must be positive");

    const GridSpec g = bilinear_grid(s.d, s.l0, s.l1, s.l2);
    const auto us = random_localized_samples(g, s.l1, count, seed);
    const auto vs = random_localized_samples(g, s.l2, count, seed + 1);
    double ratio = 0.0;
    if (in_Lambda(s.l0, s.l1, s.l2)) {
        ratio = bilinear_ratio(s, us, vs);
    } else {
        // Outside Lambda the projected product must vanish; report its size.
        for (std::size_t i = 0; i < count; ++i)
            ratio = std::max(ratio, projected_product(s.variant, s.l0, us[i], vs[i]).l2_norm() /
                                        unprojected_product(s.variant, us[i], vs[i]).l2_norm());
    }
    RatioRow row{s.d, 0, ls, s.q, paired_space_exponent(s.d, s.q), s.T, ratio, count};
    Sink sink(c.out);
    write_ratio_csv(sink.stream(), std::span(&row, 1));
    if (!in_Lambda(s.l0, s.l1, s.l2) && ratio > 1e-10) return kExitViolation;
    return kExitPass;
}

// solve

json solve_defaults() {
    SolverConfig d{GridSpec(1, 8, 1.0)};
    return {{"grid", {{"d", 1}, {"n", 128}, {"length", 16 * M_PI}}},
            {"dt", d.dt},
            {"T", d.T},
            {"s", d.s},
            {"data", {{"name", "bump"}, {"amplitude", 0.1}, {"seed", 0}, {"path", ""}}},
            {"integrator", std::string(to_string(d.integrator))},
            {"dealias", d.dealias},
            {"nonlinear", d.nonlinear},
            {"nonlinearity_form", std::string(to_string(d.form))},
            {"frame_every", d.frame_every},
            {"blowup_ceiling", d.blowup_ceiling},
            {"frames_dir", ""},
            {"d0_scan", {{"values", json::array()}, {"factor", 2.0}}}};
}

SolverConfig solver_config(const json& cfg) {
    const json& g = cfg["grid"];
    SolverConfig sc{GridSpec(get<int>(g, "d"), get<int>(g, "n"), get<double>(g, "length"))};
    if (sc.grid.dim() != 1 && sc.grid.dim() != 2) throw ConfigError("solve: grid.d must be 1 or 2");
    sc.dt = get<double>(cfg, "dt");
    sc.T = get<double>(cfg, "T");
    sc.s = get<double>(cfg, "s");
    sc.integrator = integrator_from_string(get<std::string>(cfg, "integrator"));
    sc.dealias = get<bool>(cfg, "dealias");
    sc.nonlinear = get<bool>(cfg, "nonlinear");
    sc.form = nonlinearity_form_from_string(get<std::string>(cfg, "nonlinearity_form"));
    sc.frame_every = get<int>(cfg, "frame_every");
    sc.blowup_ceiling = get<double>(cfg, "blowup_ceiling");
    sc.keep_frames = !get<std::string>(cfg, "frames_dir").empty();
    sc.validate();
    return sc;
}

PhysicalState initial_data(const GridSpec& g, const json& data) {
    const auto name = get<std::string>(data, "name");
    if (name != "file") return make_initial_data(g, name, get<double>(data, "amplitude"), get<std::uint64_t>(data, "seed"));
    const SpectralField f = io::load(get<std::string>(data, "path"));
    if (!(f.grid() == g) || f.components() != 1 + g.dim())
        throw ConfigError("solve: data file must hold eta and v (1 + d components) on the configured grid");
    std::vector<SpectralField> v;
    for (int c = 1; c <= g.dim(); ++c) v.push_back(f.extract(c));
    return {0.0, f.extract(0), stack(v)};
}

void write_frames(const std::string& dir, const std::vector<SolverState>& frames) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const PhysicalState p = from_diagonal(frames[i]);
        std::vector<SpectralField> parts{p.eta};
        for (int c = 0; c < p.v.components(); ++c) parts.push_back(p.v.extract(c));
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05zu.wbdf", i);
        io::save((fs::path(dir) / name).string(), stack(parts));
    }
}

int cmd_solve(const Common& c) {
    json cfg = solve_defaults();
    merge(cfg, read_config(c.config), "");
    if (dry_run(c, cfg)) return kExitPass;

    const SolverConfig sc = solver_config(cfg);
    const PhysicalState p0 = initial_data(sc.grid, cfg["data"]);
    Sink sink(c.out);
    auto& out = sink.stream();

    const auto d0_values = get<std::vector<double>>(cfg["d0_scan"], "values");
    if (!d0_values.empty()) {
        const auto scan = d0_scan(to_diagonal(p0), d0_values, sc, get<double>(cfg["d0_scan"], "factor"));
        out << "D0,validity_horizon\n";
        for (const auto& pt : scan) out << num(pt.d0) << ',' << (pt.horizon ? num(*pt.horizon) : "none") << '\n';
        return kExitPass;
    }

    const RunResult res = run(p0, sc);
    out << "t,Hs_eta,Hs_v,tail_mass,curl_defect,reality_defect\n";
    for (const auto& d : res.diagnostics)
        out << num(d.t) << ',' << num(d.hs_eta) << ',' << num(d.hs_v) << ',' << num(d.tail_mass) << ','
            << num(d.curl_defect) << ',' << num(d.reality_defect) << '\n';
    if (sc.keep_frames) write_frames(get<std::string>(cfg, "frames_dir"), res.frames);
    if (res.blowup_time) std::cerr << "blow-up detected; last valid time " << num(*res.blowup_time) << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersive estimates and Whitham-Boussinesq experiments"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config, "JSON config file");
        sub->add_option("-o,--out", common.out, "output CSV (default stdout)");
        sub->add_flag("--dry-run", common.dry_run, "print the resolved config and exit");
        sub->add_option("--workers", common.workers, "worker threads (default: WBD_WORKERS or all cores)");
    };

    std::optional<std::string> quantity;
    std::optional<int> beta, order;
    bool plot_table = false;

    auto* symbol = app.add_subcommand("symbol-check", "comparability scans of the dispersion symbol");
    add_common(symbol);
    symbol->add_option("--quantity", quantity, "m, m_prime, m_second, m_k or inv_mprime_k");
    symbol->add_option("--order", order, "k for m_k and inv_mprime_k");
    symbol->add_option("--beta", beta, "0 or 1")->check(CLI::IsMember({0, 1}));

    auto* kernel = app.add_subcommand("kernel-decay", "sup of the localized kernel against t");
    add_common(kernel);
    kernel->add_flag("--emit-plot-table", plot_table, "also write a long-format CSV for plotting");
    kernel->add_option("--beta", beta, "0 or 1")->check(CLI::IsMember({0, 1}));

    auto* strich = app.add_subcommand("strichartz", "Strichartz ratios over random localized data");
    add_common(strich);
    auto* bilin = app.add_subcommand("bilinear", "bilinear estimate ratios");
    add_common(bilin);
    auto* solve = app.add_subcommand("solve", "integrate the Whitham-Boussinesq system");
    add_common(solve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        apply_workers(common);
        if (symbol->parsed()) return cmd_symbol_check(common, quantity, beta, order);
        if (kernel->parsed()) return cmd_kernel_decay(common, plot_table, beta);
        if (strich->parsed()) return cmd_strichartz(common);
        if (bilin->parsed()) return cmd_bilinear(common);
        if (solve->parsed()) return cmd_solve(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Unresolved& e) {
        std::cerr << "unresolved: " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

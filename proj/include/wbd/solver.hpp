#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wbd/spectral.hpp"

namespace wbd {

/// Surface elevation and velocity; v has d components, is curl-free and has
/// zero mean.
struct PhysicalState {
    double t = 0.0;
    SpectralField eta;
    SpectralField v;
};

/// Diagonal variables u_+ and u_-.
struct SolverState {
    double t = 0.0;
    SpectralField u_plus;
    SpectralField u_minus;
};

enum class Integrator { exp_rk4, strang };

/// Sign of the transport term |D| K R.{(u_+ + u_-) R sqrt(K) (u_+ - u_-)}.
/// `derived` (-1/2) is what the evolution equations for eta and v give under
/// the diagonal change of variables; `as_written` keeps +1/2.
enum class NonlinearityForm { derived, as_written };

struct SolverConfig {
    GridSpec grid;
    double dt = 1e-2;
    double T = 1.0;
    double s = 1.0;  // Sobolev index for diagnostics
    Integrator integrator = Integrator::exp_rk4;
    bool dealias = true;
    bool nonlinear = true;
    NonlinearityForm form = NonlinearityForm::derived;
    int frame_every = 10;              // steps between diagnostic frames
    double blowup_ceiling = 1e8;       // sum of H^s norms that counts as blow-up
    bool keep_frames = false;          // store the state at each frame

    void validate() const;
};

std::string_view to_string(Integrator integrator);
Integrator integrator_from_string(std::string_view name);
std::string_view to_string(NonlinearityForm form);
NonlinearityForm nonlinearity_form_from_string(std::string_view name);

/// ||d_1 v_2 - d_2 v_1||_{L^2} / ||v||_{L^2} (0 in d = 1 or for v = 0).
double curl_defect(const SpectralField& v);

/// u_+- = eta/2 -+ i R.v / (2 sqrt K). Throws DomainError when the curl or
/// mean of v, or the imaginary part of eta or v, exceeds 1e-8 (relative).
SolverState to_diagonal(const PhysicalState& p);

/// eta = u_+ + u_-, v = -i sqrt(K) R (u_+ - u_-).
PhysicalState from_diagonal(const SolverState& s);

/// (B^+, B^-) with the 1/4 |D| sqrt(K) |R sqrt(K)(u_+ - u_-)|^2 term taken
/// with the modulus.
std::pair<SpectralField, SpectralField> nonlinearity(const SolverState& s, bool dealias = true,
                                                     NonlinearityForm form = NonlinearityForm::derived);

/// One step of size cfg.dt of (i d_t -+ m_0(D)) u_+- = B^+-.
SolverState step(const SolverState& s, const SolverConfig& cfg);

/// H^s norm ||<D>^s f||_{L^2}.
double sobolev_norm(const SpectralField& f, double s);

/// sum_+- ||u_+-||_{H^s}.
double data_size(const SolverState& s, double sobolev_index);

struct Diagnostics {
    double t = 0.0;
    double hs_eta = 0.0;     // ||eta||_{H^s}
    double hs_v = 0.0;       // ||v||_{H^{s+1/2}}
    double tail_mass = 0.0;  // max over eta and v
    double curl_defect = 0.0;
    double reality_defect = 0.0;  // max conjugate-symmetry defect of eta and v
    double size = 0.0;            // sum_+- ||u_+-||_{H^s}
};

Diagnostics diagnose(const SolverState& s, double sobolev_index);

struct RunResult {
    std::vector<Diagnostics> diagnostics;
    std::vector<SolverState> frames;  // filled when keep_frames is set
    SolverState final_state;
    std::optional<double> blowup_time;  // last valid time when blow-up stopped the run
};

/// Integrates to cfg.T, recording a frame every cfg.frame_every steps and at
/// the end. Blow-up ends the run early and is reported, not thrown.
RunResult run(const PhysicalState& p0, const SolverConfig& cfg);
RunResult run(const SolverState& s0, const SolverConfig& cfg);

/// First time at which data_size reaches `factor` times its initial value
/// (linear interpolation between steps); nullopt if not reached by cfg.T.
std::optional<double> validity_horizon(const SolverState& s0, const SolverConfig& cfg, double factor = 2.0);

struct HorizonPoint {
    double d0 = 0.0;
    std::optional<double> horizon;
};

/// Rescales `shape` so that data_size = d0 for each entry and measures the
/// validity horizon; runs execute concurrently.
std::vector<HorizonPoint> d0_scan(const SolverState& shape, std::span<const double> d0_list,
                                  const SolverConfig& cfg, double factor = 2.0);

/// Named initial data: "zero", "bump" (Gaussian eta, v = 0), "packet"
/// (modulated Gaussian in eta and in the velocity potential), "random"
/// (band-limited random eta and potential). `amplitude` scales eta.
PhysicalState make_initial_data(const GridSpec& grid, std::string_view name, double amplitude,
                                std::uint64_t seed = 0);

}  // namespace wbd

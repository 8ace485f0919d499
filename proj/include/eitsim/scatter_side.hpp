// scatter_side.hpp — side-coupled geometry: two counter-propagating modes
#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "eitsim/model.hpp"
#include "eitsim/wavegrid.hpp"

namespace eitsim {

inline constexpr double default_settle_threshold = 1e-4;

struct SideCouplingRun {
    SystemParams params;
    Grid1D grid{4096, 2100, 1.0};
    CouplingSchedule schedule;
    WaveState initial;
    std::vector<double> snapshot_times;
    double settle_threshold{default_settle_threshold};
};

// Per-step bookkeeping, norms in probability units.
struct StepFlux {
    cplx out_T{};           // amplitude leaving the site in the through/outgoing mode
    cplx out_R{};           // amplitude leaving in the reflected mode (side geometry)
    double dissipated{0.0}; // loss through kappa1, kappa2 during the step
    double escaped{0.0};    // norm removed at the grid ends
};

class SideIntegrator {
public:
    SideIntegrator(const SystemParams& params, const Grid1D& grid);
    ~SideIntegrator();
    SideIntegrator(SideIntegrator&&) noexcept;
    SideIntegrator& operator=(SideIntegrator&&) noexcept;

    // Advances the state by dt with h_e held at h_mid (its value at t + dt/2).
    StepFlux step(WaveState& state, double h_mid);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

WaveState step_side(const WaveState& state, const SystemParams& params, const Grid1D& grid,
                    double h_e_now);

struct Snapshot {
    double t{0.0};
    WaveState state;
};

struct DelayReport {
    double delay{0.0};          // transmitted centroid lag behind the free reference, time units
    double retention{0.0};      // transmitted norm
    double reflected{0.0};      // norm emitted into the reflected mode
    double dissipated{0.0};
    double residual{0.0};       // norm left in resonators and incoming field
    double escaped{0.0};
    double input_centroid{0.0};
    double free_centroid{0.0};
    double output_centroid{0.0};
    double fwhm_ratio{0.0};     // output / input spectral FWHM
    double t_final{0.0};
    std::size_t steps{0};
    std::vector<cplx> transmitted;  // outgoing profile, ascending position
    std::vector<double> transmitted_x;
    std::vector<SpectrumSample> input_spectrum;
    std::vector<SpectrumSample> output_spectrum;
    std::vector<Snapshot> snapshots;
};

// Narrowband requirement on the pulse width when h_e > 0.
double min_slowing_width(const SystemParams& params, double h_e, double v_g);

DelayReport run_slowing(const SideCouplingRun& config);

namespace detail {

// Assembles a DelayReport from an emission record; shared by both geometries.
struct EmissionRecord {
    std::vector<cplx> out_T;
    double reflected{0.0};
    double dissipated{0.0};
    double escaped{0.0};
    double residual{0.0};
    std::size_t steps{0};
    double t_final{0.0};
    std::vector<Snapshot> snapshots;
};

DelayReport make_delay_report(const WaveState& initial, const Grid1D& grid, EmissionRecord rec);

double incoming_norm(const WaveState& state, const Grid1D& grid);

std::vector<std::size_t> snapshot_steps(std::span<const double> times, double dt);

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace detail

} // namespace eitsim

// scatter_end.hpp — end-coupled geometry: single folded mode with a terminating phase
#pragma once

#include <memory>
#include <numbers>
#include <vector>

#include "eitsim/model.hpp"
#include "eitsim/scatter_side.hpp"
#include "eitsim/wavegrid.hpp"

namespace eitsim {

inline constexpr double default_switch_sharpness = 0.5;

struct EndCouplingRun {
    SystemParams params;
    Grid1D grid{4096, 1200, 10.0};
    CouplingSchedule schedule;
    double phase_phi{std::numbers::pi};
    double switch_sharpness{default_switch_sharpness}; // f_a, cells
    WaveState initial;
    std::vector<double> snapshot_times;
    double settle_threshold{1e-12};
};

class EndIntegrator {
public:
    EndIntegrator(const SystemParams& params, const Grid1D& grid, double phase_phi,
                  double switch_sharpness = default_switch_sharpness);
    ~EndIntegrator();
    EndIntegrator(EndIntegrator&&) noexcept;
    EndIntegrator& operator=(EndIntegrator&&) noexcept;

    // out_T carries the emitted amplitude including the phase it still picks
    // up downstream of x0, i.e. its final outgoing value.
    StepFlux step(WaveState& state, double h_mid);

    // Per-cell increments of the logistic switch, normalized to sum to one.
    const std::vector<double>& phase_increments() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

WaveState step_end(const WaveState& state, const SystemParams& params, const Grid1D& grid, double h_e_now,
                   double phase_phi = std::numbers::pi, double f_a = default_switch_sharpness);

struct StorageReport {
    double reflected_fraction{0.0};
    double retrieved_fraction{0.0};
    double residual{0.0};
    double dissipated{0.0};
    double escaped{0.0};       // removed at the grid ends, informational
    double ledger_error{0.0};  // |reflected + retrieved + residual + dissipated - initial norm|
    double stored_norm{0.0};   // |e2|^2 at the start of the hold plateau
    double hold_time{0.0};
    double hold_e2_drift{0.0}; // max relative change of |e2|^2 across the hold plateau
    double split_time{0.0};    // release ramp start; emissions after it count as retrieved
    double overlap{0.0};       // cross norm inside the +-3 tau windows of the two pulses
    double reflected_centroid_t{0.0};
    double retrieved_centroid_t{0.0};
    std::size_t steps{0};
    std::vector<double> times;
    std::vector<double> e1_series;
    std::vector<double> e2_series;
    std::vector<double> h_series;
    std::vector<double> output_power; // |outgoing amplitude|^2 per step, emission-time ordered
    std::vector<Snapshot> snapshots;
};

StorageReport run_storage(const EndCouplingRun& config);

// Slowing measurement in the end geometry (same report as the side model).
DelayReport run_end_slowing(const EndCouplingRun& config);

void write_series_csv(const std::string& path, const StorageReport& report);

} // namespace eitsim

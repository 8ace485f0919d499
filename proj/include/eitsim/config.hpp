// config.hpp — experiment configuration documents (JSON)
#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "eitsim/model.hpp"
#include "eitsim/wavegrid.hpp"

namespace eitsim {

enum class Scenario { spectrum, delay_curve, slow, store, oracle };

std::string scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name); // throws ConfigError

struct GridSettings {
    std::size_t n_cells{4096};
    std::size_t x_resonator{2100};
    double dx{1.0};
    Boundary boundary{Boundary::open};
    bool operator==(const GridSettings&) const = default;
};

struct PulseSettings {
    double center{1000.0};
    double tau{200.0};
    double k_offset{0.0};
    bool operator==(const PulseSettings&) const = default;
};

// Couplings and detunings in units of kappa_1 or kappa_1' (see `scale`).
struct SpectrumSettings {
    std::vector<double> h_e{0.0, 0.25, 1.0};
    double detuning_min{-2.0};
    double detuning_max{2.0};
    std::size_t points{801};
    bool relative_to_kappa1_prime{true};
    bool operator==(const SpectrumSettings&) const = default;
};

struct DelayCurveSettings {
    double h_min{0.05};
    double h_max{1.5};
    std::size_t points{146};
    double detuning{0.0};
    bool relative_to_kappa1_prime{true};
    bool operator==(const DelayCurveSettings&) const = default;
};

enum class Geometry { side, end };

struct SlowSettings {
    Geometry geometry{Geometry::side};
    std::vector<double> h_e{0.25};
    std::vector<double> snapshot_times;
    double settle_threshold{1e-4};
    bool operator==(const SlowSettings&) const = default;
};

struct StoreSettings {
    double phase_phi{std::numbers::pi};
    double switch_sharpness{0.5};
    std::vector<double> snapshot_times;
    double settle_threshold{1e-12};
    bool operator==(const StoreSettings&) const = default;
};

struct OracleSettings {
    double g{1.0};
    std::vector<double> ratios{10.0, 20.0, 40.0, 80.0};
    double comparison_ratio{20.0};
    std::size_t comparison_samples{2001};
    bool operator==(const OracleSettings&) const = default;
};

struct OutputSettings {
    std::string prefix; // empty: scenario name
    bool svg{false};
    bool operator==(const OutputSettings&) const = default;
};

// All physical quantities held in normalized units (kappa_1 = 1, cells).
struct ExperimentConfig {
    Scenario scenario{Scenario::spectrum};
    SystemParams params;
    GridSettings grid;
    PulseSettings pulse;
    CouplingSchedule schedule;
    SpectrumSettings spectrum;
    DelayCurveSettings delay_curve;
    SlowSettings slow;
    StoreSettings store;
    OracleSettings oracle;
    OutputSettings outputs;

    Grid1D make_grid() const;
    std::string output_prefix() const;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses and validates; ConfigError names the offending field or lists unknown keys.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path); // IoError when unreadable

// Normalized-unit document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

} // namespace eitsim

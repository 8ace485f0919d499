// oracle_full.hpp — three-state qubit/resonator model versus the effective two-mode model
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "eitsim/model.hpp"

namespace eitsim {

// Amplitudes over {|1,0;g>, |0,1;g>, |0,0;e>}.
using FullModelState = Eigen::Vector3cd;
// Amplitudes over {|1,0>, |0,1>}.
using EffectiveState = Eigen::Vector2cd;

Eigen::Matrix3cd build_full_hamiltonian(const SystemParams& params);
Eigen::Matrix2cd build_effective_hamiltonian(const SystemParams& params);

// exp(-i H t) state by eigendecomposition.
FullModelState evolve_full(const FullModelState& state, const Eigen::Matrix3cd& H, double t);
EffectiveState evolve_effective(const EffectiveState& state, const Eigen::Matrix2cd& H, double t);

struct EliminationError {
    double amplitude{0.0}; // max_t ||(c1,c2)_full - e^{i a(t)} (c1,c2)_eff||, a(t) aligning phases
    double excited{0.0};   // max_t |c_e|^2
};

// Samples [0, t_max] finely enough to resolve the qubit-detuning oscillation
// (at least `min_samples` points).
EliminationError elimination_error(const SystemParams& params, double t_max, std::size_t min_samples = 2001);

// Period of |c2|^2 from the first two maxima of the exact evolution from |1,0;g>.
double full_rabi_period(const SystemParams& params);

// pi / |h_e|.
double effective_rabi_period(const SystemParams& params);

struct OracleRow {
    double ratio{0.0}; // Delta_a / |g|
    double h_e{0.0};
    double period_full{0.0};
    double period_eff{0.0};
    double amplitude_error{0.0};
    double excited_max{0.0};
};

// g1 = g2 = g, delta = 0; one effective Rabi period per ratio.
OracleRow oracle_point(double g, double ratio);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// `t,p1_full,p2_full,pe_full,p1_eff,p2_eff` on a uniform time grid.
void write_comparison_csv(const std::string& path, const SystemParams& params, double t_max, std::size_t samples);

} // namespace eitsim

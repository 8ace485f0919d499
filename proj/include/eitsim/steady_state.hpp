// steady_state.hpp — analytic driven response, group delay and mean-field transients
#pragma once

#include <span>
#include <vector>

#include "eitsim/model.hpp"

namespace eitsim {

struct SpectrumPoint {
    double detuning{0.0}; // Delta'_in
    cplx amplitude_t{};   // alpha_out / alpha_in
    double power_T{0.0};  // |t|^2
    double phase{0.0};    // arg t, unwrapped along the sweep
    double tau_g{0.0};    // -d(arg t)/dDelta'_in; NaN where t = 0
};

// Output-to-input amplitude of the driven two-resonator system at drive
// detuning delta_in_prime. The h_e = 0 and kappa_ex = 0 limits are evaluated
// in closed form rather than through the 0/0 of the general expression.
cplx steady_amplitude(const SystemParams& params, double h_e, double delta_in_prime);

// d t / d Delta'_in, analytic.
cplx steady_amplitude_derivative(const SystemParams& params, double h_e, double delta_in_prime);

std::vector<SpectrumPoint> spectrum_sweep(const SystemParams& params, double h_e,
                                          std::span<const double> detuning_grid);

// Central-difference group delay -(phi(D + s) - phi(D - s)) / 2s.
double group_delay_numeric(const SystemParams& params, double h_e, double delta_in_prime, double step);

// 2 kappa_ex (h^2 - kappa2^2) / (h^2 + kappa'_1 kappa2)^2 at Delta_in = delta = 0.
double group_delay_closed(const SystemParams& params, double h_e);

// Accumulates 2 pi corrections wherever consecutive samples jump by more than pi.
void unwrap_phase(std::span<double> phase);

// Full width of the transparency window around Delta' = 0 at half of T(0),
// from the two crossings nearest the origin.
double transparency_fwhm(const SystemParams& params, double h_e);

struct TransientSample {
    double t{0.0};
    cplx alpha{};
    cplx beta{};
    cplx alpha_out{};
};

// Fixed-step RK4 integration of the mean-field Langevin equations from
// alpha = beta = 0. Requires dt <= 0.05 / max(kappa'_1, max|h_e|, |Delta'_in| + |delta|).
std::vector<TransientSample> langevin_transient(const SystemParams& params, const CouplingSchedule& schedule,
                                                cplx alpha_in, double t_end, double dt);

} // namespace eitsim

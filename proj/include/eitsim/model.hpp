// model.hpp — physical parameters, effective coupling and time-dependent schedules
#pragma once

#include <complex>
#include <vector>

namespace eitsim {

using cplx = std::complex<double>;

// |Delta_a| must exceed this multiple of the largest qubit-resonator coupling.
inline constexpr double dispersive_ratio_min = 5.0;

// Reference kappa_1 used for SI conversion (Hz, cyclic): kappa_1 = 2 pi x 5 MHz.
inline constexpr double reference_kappa1_hz = 5.0e6;

// All rates and detunings are in units of kappa_1 unless stated otherwise.
struct SystemParams {
    double kappa1{1.0};   // intrinsic loss of resonator 1
    double kappa_ex{1.0}; // external coupling of resonator 1 to the line
    double kappa2{0.0};   // intrinsic loss of resonator 2
    double delta{0.0};    // omega_r2 - omega_r1
    cplx g1{0.0};         // qubit - resonator 1 coupling
    cplx g2{0.0};         // qubit - resonator 2 coupling
    double delta_a{0.0};  // omega_q - omega_r1; ignored while g1 = g2 = 0
    double delta_in{0.0}; // omega_r1 - omega_in
    double v_g{1.0};      // group velocity, grid cells per 1/kappa_1

    double kappa1_prime() const { return kappa1 + kappa_ex; }

    // Drive detuning including the qubit-induced Stark shift of resonator 1.
    double delta_in_prime() const;

    // Throws ContractError for negative rates or v_g <= 0 and DomainError
    // when the dispersive guard fails.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

// Cross coupling -(1/2)(1/Delta_a + 1/(Delta_a - delta)) g1 g2^*.
cplx effective_coupling(cplx g1, cplx g2, double delta_a, double delta);

// Diagonal dispersive shift -|g|^2/Delta_a.
double stark_shift(cplx g, double delta_a);

// Shift -|g_s|^2/Delta_s induced by a dispersively coupled SQUID.
double squid_shift(cplx g_s, double delta_s);

struct Segment {
    double t_start{0.0};
    double t_end{0.0};
    double level{0.0};

    bool operator==(const Segment&) const = default;
};

inline constexpr double default_ramp_time = 0.5;

// Piecewise-constant h_e(t) with raised-cosine ramps of width ramp_time
// centred on every level change. Gaps between segments are at zero level;
// before the first and after the last segment the nearest level holds.
class CouplingSchedule {
public:
    CouplingSchedule() : CouplingSchedule({{0.0, 1.0, 0.0}}) {}
    CouplingSchedule(std::vector<Segment> segments, double ramp_time = default_ramp_time);

    static CouplingSchedule constant(double level);

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;

    double max_abs_level() const;

    // True when the schedule has an on-segment, then a zero-level gap, then
    // another on-segment.
    bool has_hold() const;

    // First off-gap [start, end) between two on-segments; only valid if has_hold().
    Segment hold_gap() const;

    const std::vector<Segment>& segments() const { return segments_; }
    double ramp_time() const { return ramp_time_; }

    bool operator==(const CouplingSchedule&) const = default;

private:
    struct Break {
        double t;
        double before;
        double after;
        bool operator==(const Break&) const = default;
    };

    std::vector<Segment> segments_;
    double ramp_time_{default_ramp_time};
    std::vector<Break> breaks_;
};

double schedule_eval(const CouplingSchedule& schedule, double t);

} // namespace eitsim

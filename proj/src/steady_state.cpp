#include "eitsim/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eitsim/errors.hpp"

namespace eitsim {

namespace {

struct Response {
    cplx t;
    cplx dt; // derivative with respect to Delta'_in
};

Response response(const SystemParams& p, double h, double d)
{
    const cplx i{0.0, 1.0};
    const double kex = p.kappa_ex;
    const double kp = p.kappa1_prime();

    if (kex == 0.0)
        return {-1.0, 0.0};

    if (h == 0.0) {
        // resonator 2 decoupled: single-port Lorentzian
        const cplx den = kp + i * d;
        if (den == cplx{0.0})
            throw DomainError("lossless singular point");
        return {-1.0 + 2.0 * kex / den, -2.0 * kex * i / (den * den)};
    }

    const cplx n = p.kappa2 + i * (p.delta + d);
    const cplx den = h * h + (kp + i * d) * n;
    if (den == cplx{0.0})
        throw DomainError("lossless singular point");
    // d(den)/dD = i n + (kp + i d) i
    const cplx dden = i * n + i * (kp + i * d);
    const cplx t = -1.0 + 2.0 * kex * n / den;
    const cplx dt = 2.0 * kex * (i * den - n * dden) / (den * den);
    return {t, dt};
}

} // namespace

cplx steady_amplitude(const SystemParams& params, double h_e, double delta_in_prime)
{
    return response(params, h_e, delta_in_prime).t;
}

cplx steady_amplitude_derivative(const SystemParams& params, double h_e, double delta_in_prime)
{
    return response(params, h_e, delta_in_prime).dt;
}

void unwrap_phase(std::span<double> phase)
{
    if (phase.empty())
        return;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double offset = 0.0;
    double prev_raw = phase[0];
    for (std::size_t k = 1; k < phase.size(); ++k) {
        const double raw = phase[k];
        const double jump = raw - prev_raw;
        if (std::abs(jump) > std::numbers::pi)
            offset -= two_pi * std::round(jump / two_pi);
        prev_raw = raw;
        phase[k] = raw + offset;
    }
}

std::vector<SpectrumPoint> spectrum_sweep(const SystemParams& params, double h_e,
                                          std::span<const double> detuning_grid)
{
    params.validate();
    for (std::size_t k = 1; k < detuning_grid.size(); ++k)
        if (!(detuning_grid[k] > detuning_grid[k - 1]))
            throw ContractError("detuning grid must be strictly increasing");

    std::vector<SpectrumPoint> out;
    out.reserve(detuning_grid.size());
    std::vector<double> phase;
    phase.reserve(detuning_grid.size());
    for (double d : detuning_grid) {
        const auto r = response(params, h_e, d);
        SpectrumPoint p;
        p.detuning = d;
        p.amplitude_t = r.t;
        p.power_T = std::norm(r.t);
        p.tau_g = (r.t == cplx{0.0}) ? std::numeric_limits<double>::quiet_NaN() : -std::imag(r.dt / r.t);
        out.push_back(p);
        phase.push_back(std::arg(r.t));
    }
    unwrap_phase(phase);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k].phase = phase[k];
    return out;
}

double group_delay_numeric(const SystemParams& params, double h_e, double delta_in_prime, double step)
{
    params.validate();
    if (!(step > 0.0))
        throw ContractError("step must be > 0");
    // The stencil may not straddle a zero of t; check the three nodes and
    // the magnitude minimum between them.
    const cplx t_minus = steady_amplitude(params, h_e, delta_in_prime - step);
    const cplx t_mid = steady_amplitude(params, h_e, delta_in_prime);
    const cplx t_plus = steady_amplitude(params, h_e, delta_in_prime + step);
    const double tiny = 1e-300;
    if (std::abs(t_minus) < tiny || std::abs(t_mid) < tiny || std::abs(t_plus) < tiny)
        throw DomainError("phase undefined at extinction");
    // consecutive phase differences beyond pi/2 indicate a phase singularity inside the stencil
    const double d1 = std::arg(t_mid / t_minus);
    const double d2 = std::arg(t_plus / t_mid);
    if (std::abs(d1) > 0.5 * std::numbers::pi || std::abs(d2) > 0.5 * std::numbers::pi)
        throw DomainError("phase undefined at extinction");
    return -(d1 + d2) / (2.0 * step);
}

double group_delay_closed(const SystemParams& params, double h_e)
{
    params.validate();
    if (params.delta != 0.0)
        throw ContractError("closed form valid only on symmetric resonance");
    const double h2 = h_e * h_e;
    const double k2 = params.kappa2;
    const double den = h2 + params.kappa1_prime() * k2;
    if (den == 0.0)
        throw DomainError("closed-form delay undefined for h_e = kappa2 = 0");
    return 2.0 * params.kappa_ex * (h2 - k2 * k2) / (den * den);
}

double transparency_fwhm(const SystemParams& params, double h_e)
{
    auto T = [&](double d) { return std::norm(steady_amplitude(params, h_e, d)); };
    const double half = 0.5 * T(0.0);
    if (!(half > 0.0))
        throw DomainError("no transparency at zero detuning");
    const double kp = params.kappa1_prime();
    const double step = 1e-3 * std::min(kp, std::max(h_e, 1e-3 * kp));
    const double reach = 100.0 * (kp + std::abs(h_e) + std::abs(params.delta));

    auto crossing = [&](double dir) {
        double a = 0.0;
        double b = step;
        while (T(dir * b) > half) {
            a = b;
            b += step;
            if (b > reach)
                throw DomainError("transparency window edge not found");
        }
        for (int it = 0; it < 200 && b - a > 1e-14 * kp; ++it) {
            const double m = 0.5 * (a + b);
            (T(dir * m) > half ? a : b) = m;
        }
        return 0.5 * (a + b);
    };
    return crossing(1.0) + crossing(-1.0);
}

std::vector<TransientSample> langevin_transient(const SystemParams& params, const CouplingSchedule& schedule,
                                                cplx alpha_in, double t_end, double dt)
{
    params.validate();
    const double dp = params.delta_in_prime();
    const double rate_max =
        std::max({params.kappa1_prime(), schedule.max_abs_level(), std::abs(dp) + std::abs(params.delta)});
    if (!(dt > 0.0) || (rate_max > 0.0 && dt > 0.05 / rate_max * (1.0 + 1e-12)))
        throw ContractError("dt violates step-size bound 0.05 / max rate");
    if (!(t_end >= 0.0))
        throw ContractError("t_end must be >= 0");

    const cplx i{0.0, 1.0};
    const double kp = params.kappa1_prime();
    const double k2 = params.kappa2;
    const double delta = params.delta;
    const cplx drive = std::sqrt(2.0 * params.kappa_ex) * alpha_in;

    struct Y {
        cplx a, b;
    };
    auto rhs = [&](double t, const Y& y) {
        const double h = schedule.eval(t);
        return Y{-(i * dp + kp) * y.a - i * h * y.b + drive, -(i * dp + i * delta + k2) * y.b - i * h * y.a};
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::vector<TransientSample> out;
    out.reserve(n_steps + 1);
    Y y{0.0, 0.0};
    auto record = [&](double t) {
        out.push_back({t, y.a, y.b, -alpha_in + std::sqrt(2.0 * params.kappa_ex) * y.a});
    };
    record(0.0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = n * dt;
        const Y k1 = rhs(t, y);
        const Y k2v = rhs(t + 0.5 * dt, {y.a + 0.5 * dt * k1.a, y.b + 0.5 * dt * k1.b});
        const Y k3 = rhs(t + 0.5 * dt, {y.a + 0.5 * dt * k2v.a, y.b + 0.5 * dt * k2v.b});
        const Y k4 = rhs(t + dt, {y.a + dt * k3.a, y.b + dt * k3.b});
        y.a += dt / 6.0 * (k1.a + 2.0 * k2v.a + 2.0 * k3.a + k4.a);
        y.b += dt / 6.0 * (k1.b + 2.0 * k2v.b + 2.0 * k3.b + k4.b);
        if (!std::isfinite(std::abs(y.a)) || !std::isfinite(std::abs(y.b)))
            throw NumericError("integration diverged");
        record((n + 1) * dt);
    }
    return out;
}

} // namespace eitsim

#include "eitsim/scatter_side.hpp"

#include <algorithm>
#include <cmath>

#include "eitsim/errors.hpp"
#include "local_coupling.hpp"

namespace eitsim {

struct SideIntegrator::Impl {
    Impl(const SystemParams& p, const Grid1D& g)
        : grid(g), prop(p, g.dt(), p.delta_in_prime()), sdx(std::sqrt(g.dx()))
    {
    }
    Grid1D grid;
    detail::LocalPropagator<2> prop;
    double sdx;
};

SideIntegrator::SideIntegrator(const SystemParams& params, const Grid1D& grid)
    : impl_(std::make_unique<Impl>(params, grid))
{
    params.validate();
}

SideIntegrator::~SideIntegrator() = default;
SideIntegrator::SideIntegrator(SideIntegrator&&) noexcept = default;
SideIntegrator& SideIntegrator::operator=(SideIntegrator&&) noexcept = default;

StepFlux SideIntegrator::step(WaveState& s, double h_mid)
{
    const Grid1D& g = impl_->grid;
    if (!s.phi_R || s.phi_T.size() != g.n_cells() || s.phi_R->size() != g.n_cells())
        throw ContractError("state dimensions do not match the grid");
    auto& fT = s.phi_T;
    auto& fR = *s.phi_R;
    const std::size_t x0 = g.x_resonator();

    StepFlux flux;
    flux.escaped += detail::advect(fT, +1) * g.dx();
    flux.escaped += detail::advect(fR, -1) * g.dx();
    if (g.boundary() == Boundary::sponge) {
        flux.escaped += detail::apply_sponge(fT) * g.dx();
        flux.escaped += detail::apply_sponge(fR) * g.dx();
    }

    using P = detail::LocalPropagator<2>;
    const double sdx = impl_->sdx;
    P::Vector v;
    v << fT[x0] * sdx, fR[x0] * sdx, s.e1, s.e2;
    const double before = v.squaredNorm();
    const P::Vector w = impl_->prop.get(h_mid) * v;
    for (int k = 0; k < 4; ++k)
        if (!detail::finite(w(k)))
            throw NumericError("integration diverged");
    flux.dissipated = before - w.squaredNorm();
    fT[x0] = w(0) / sdx;
    fR[x0] = w(1) / sdx;
    s.e1 = w(2);
    s.e2 = w(3);
    s.t += g.dt();
    flux.out_T = fT[x0];
    flux.out_R = fR[x0];
    return flux;
}

WaveState step_side(const WaveState& state, const SystemParams& params, const Grid1D& grid, double h_e_now)
{
    WaveState next = state;
    SideIntegrator integ(params, grid);
    integ.step(next, h_e_now);
    return next;
}

double min_slowing_width(const SystemParams& params, double h_e, double v_g)
{
    if (h_e == 0.0)
        return 0.0;
    const double kp = params.kappa1_prime();
    return v_g / std::min(h_e * h_e / kp, kp);
}

namespace detail {

double incoming_norm(const WaveState& state, const Grid1D& grid)
{
    const std::size_t x0 = grid.x_resonator();
    double n = 0.0;
    for (std::size_t j = 0; j < x0; ++j)
        n += std::norm(state.phi_T[j]);
    if (state.phi_R)
        for (std::size_t j = x0 + 1; j < state.phi_R->size(); ++j)
            n += std::norm((*state.phi_R)[j]);
    return n * grid.dx();
}

std::vector<std::size_t> snapshot_steps(std::span<const double> times, double dt)
{
    std::vector<std::size_t> out;
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw ContractError("snapshot times must be finite and >= 0");
        out.push_back(static_cast<std::size_t>(std::llround(t / dt)));
    }
    return out;
}

DelayReport make_delay_report(const WaveState& initial, const Grid1D& grid, EmissionRecord rec)
{
    DelayReport r;
    r.steps = rec.steps;
    r.t_final = rec.t_final;
    r.reflected = rec.reflected;
    r.dissipated = rec.dissipated;
    r.escaped = rec.escaped;
    r.residual = rec.residual;
    r.snapshots = std::move(rec.snapshots);

    // Emission n (1-based) sits at x0 + (steps - n) cells at the final time.
    const std::size_t n = rec.out_T.size();
    r.transmitted.assign(rec.out_T.rbegin(), rec.out_T.rend());
    r.transmitted_x.resize(n);
    const double x0 = grid.position(grid.x_resonator());
    double w = 0.0;
    double wx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        r.transmitted_x[k] = x0 + static_cast<double>(rec.steps - n + k) * grid.dx();
        const double p = std::norm(r.transmitted[k]);
        w += p;
        wx += p * r.transmitted_x[k];
    }
    r.retention = w * grid.dx();
    r.input_centroid = centroid(initial.phi_T, grid);
    r.free_centroid = r.input_centroid + static_cast<double>(rec.steps) * grid.dx();
    if (!(r.retention > 1e-6))
        throw DomainError("transmitted pulse is empty");
    r.output_centroid = wx / w;
    r.delay = (r.free_centroid - r.output_centroid) / grid.v_g();

    r.input_spectrum = field_spectrum(initial.phi_T, grid);
    r.output_spectrum = field_spectrum(r.transmitted, grid);
    r.fwhm_ratio = spectral_fwhm(r.output_spectrum) / spectral_fwhm(r.input_spectrum);
    return r;
}

} // namespace detail

DelayReport run_slowing(const SideCouplingRun& cfg)
{
    const Grid1D& g = cfg.grid;
    cfg.params.validate();
    const auto& init = cfg.initial;
    if (!init.phi_R || init.phi_T.size() != g.n_cells() || init.phi_R->size() != g.n_cells())
        throw ContractError("initial state must carry both modes on the grid");
    if (std::any_of(init.phi_R->begin(), init.phi_R->end(), [](cplx z) { return z != cplx{0.0}; })
        || init.e1 != cplx{0.0} || init.e2 != cplx{0.0})
        throw ContractError("photon must start in the incoming mode");
    if (cfg.schedule.max_abs_level() > 0.0) {
        const double tau = pulse_width(init.phi_T, g);
        const double need = min_slowing_width(cfg.params, cfg.schedule.max_abs_level(), g.v_g());
        if (tau < need * (1.0 - 1e-9))
            throw ContractError("pulse not narrowband: tau below v_g / min(h_e^2/kappa1', kappa1')");
    }

    SideIntegrator integ(cfg.params, g);
    WaveState s = init;
    s.t = 0.0;
    const auto snap = detail::snapshot_steps(cfg.snapshot_times, g.dt());
    const std::size_t max_steps = 64 * g.n_cells();

    detail::EmissionRecord rec;
    auto take_snapshots = [&](std::size_t step) {
        for (std::size_t k = 0; k < snap.size(); ++k)
            if (snap[k] == step)
                rec.snapshots.push_back({cfg.snapshot_times[k], s});
    };
    take_snapshots(0);
    std::size_t step = 0;
    while (step < max_steps) {
        const double h = cfg.schedule(s.t + 0.5 * g.dt());
        const StepFlux f = integ.step(s, h);
        ++step;
        rec.out_T.push_back(f.out_T);
        rec.reflected += std::norm(f.out_R) * g.dx();
        rec.dissipated += f.dissipated;
        rec.escaped += f.escaped;
        take_snapshots(step);
        const double res = std::norm(s.e1) + std::norm(s.e2);
        if (res < cfg.settle_threshold && detail::incoming_norm(s, g) < 1e-14
            && std::all_of(snap.begin(), snap.end(), [&](std::size_t k) { return k <= step; }))
            break;
    }
    rec.steps = step;
    rec.t_final = s.t;
    rec.residual = std::norm(s.e1) + std::norm(s.e2) + detail::incoming_norm(s, g);
    return detail::make_delay_report(init, g, std::move(rec));
}

} // namespace eitsim

#include "eitsim/scatter_end.hpp"

#include <algorithm>
#include <cmath>

#include "eitsim/csv.hpp"
#include "eitsim/errors.hpp"
#include "local_coupling.hpp"

namespace eitsim {

struct EndIntegrator::Impl {
    Impl(const SystemParams& p, const Grid1D& g, double phi, double f_a)
        : grid(g), prop(p, g.dt(), p.delta_in_prime()), sdx(std::sqrt(g.dx()))
    {
        const std::size_t n = g.n_cells();
        const double x0 = g.position(g.x_resonator());
        auto f = [&](std::size_t j) {
            return 1.0 / (1.0 + std::exp(-(g.position(j) - x0) / (f_a * g.dx())));
        };
        increments.assign(n, 0.0);
        const double total = f(n - 1) - f(0);
        for (std::size_t j = 1; j < n; ++j)
            increments[j] = (f(j) - f(j - 1)) / total;

        factors.assign(n, cplx{1.0});
        double downstream = 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            if (increments[j] == 0.0)
                continue;
            factors[j] = std::polar(1.0, phi * increments[j]);
            lo = std::min(lo, j);
            hi = std::max(hi, j + 1);
            if (j > g.x_resonator())
                downstream += increments[j];
        }
        post = std::polar(1.0, phi * downstream);
    }

    Grid1D grid;
    detail::LocalPropagator<1> prop;
    double sdx;
    std::vector<double> increments;
    std::vector<cplx> factors;
    std::size_t lo{static_cast<std::size_t>(-1)};
    std::size_t hi{0};
    cplx post{1.0};
};

EndIntegrator::EndIntegrator(const SystemParams& params, const Grid1D& grid, double phase_phi,
                             double switch_sharpness)
{
    params.validate();
    if (!(phase_phi >= 0.0 && phase_phi < 2.0 * std::numbers::pi))
        throw ContractError("phase_phi must lie in [0, 2 pi)");
    if (!(switch_sharpness > 0.0))
        throw ContractError("switch_sharpness must be > 0");
    impl_ = std::make_unique<Impl>(params, grid, phase_phi, switch_sharpness);
}

EndIntegrator::~EndIntegrator() = default;
EndIntegrator::EndIntegrator(EndIntegrator&&) noexcept = default;
EndIntegrator& EndIntegrator::operator=(EndIntegrator&&) noexcept = default;

const std::vector<double>& EndIntegrator::phase_increments() const { return impl_->increments; }

StepFlux EndIntegrator::step(WaveState& s, double h_mid)
{
    Impl& m = *impl_;
    const Grid1D& g = m.grid;
    if (s.phi_T.size() != g.n_cells())
        throw ContractError("state dimensions do not match the grid");
    auto& f = s.phi_T;
    const std::size_t x0 = g.x_resonator();

    StepFlux flux;
    flux.escaped += detail::advect(f, +1) * g.dx();
    if (g.boundary() == Boundary::sponge)
        flux.escaped += detail::apply_sponge(f) * g.dx();
    for (std::size_t j = m.lo; j < m.hi; ++j)
        f[j] *= m.factors[j];

    using P = detail::LocalPropagator<1>;
    P::Vector v;
    v << f[x0] * m.sdx, s.e1, s.e2;
    const double before = v.squaredNorm();
    const P::Vector w = m.prop.get(h_mid) * v;
    for (int k = 0; k < 3; ++k)
        if (!detail::finite(w(k)))
            throw NumericError("integration diverged");
    flux.dissipated = before - w.squaredNorm();
    f[x0] = w(0) / m.sdx;
    s.e1 = w(1);
    s.e2 = w(2);
    s.t += g.dt();
    flux.out_T = f[x0] * m.post;
    return flux;
}

WaveState step_end(const WaveState& state, const SystemParams& params, const Grid1D& grid, double h_e_now,
                   double phase_phi, double f_a)
{
    WaveState next = state;
    EndIntegrator integ(params, grid, phase_phi, f_a);
    integ.step(next, h_e_now);
    return next;
}

namespace {

struct EndTrace {
    std::vector<cplx> out;
    std::vector<double> times, e1, e2, h;
    double dissipated{0.0};
    double escaped{0.0};
    double residual{0.0};
    std::size_t steps{0};
    double t_final{0.0};
    std::vector<Snapshot> snapshots;
};

EndTrace run_end(const EndCouplingRun& cfg, double t_min)
{
    const Grid1D& g = cfg.grid;
    const auto& init = cfg.initial;
    if (init.phi_T.size() != g.n_cells() || init.phi_R)
        throw ContractError("initial state must be a single mode on the grid");
    if (init.e1 != cplx{0.0} || init.e2 != cplx{0.0})
        throw ContractError("photon must start in the line");

    EndIntegrator integ(cfg.params, g, cfg.phase_phi, cfg.switch_sharpness);
    WaveState s = init;
    s.t = 0.0;
    const auto snap = detail::snapshot_steps(cfg.snapshot_times, g.dt());
    const std::size_t max_steps = 64 * g.n_cells();

    EndTrace tr;
    auto take_snapshots = [&](std::size_t step) {
        for (std::size_t k = 0; k < snap.size(); ++k)
            if (snap[k] == step)
                tr.snapshots.push_back({cfg.snapshot_times[k], s});
    };
    take_snapshots(0);
    std::size_t step = 0;
    while (step < max_steps) {
        const double h = cfg.schedule(s.t + 0.5 * g.dt());
        const StepFlux f = integ.step(s, h);
        ++step;
        tr.out.push_back(f.out_T);
        tr.dissipated += f.dissipated;
        tr.escaped += f.escaped;
        tr.times.push_back(s.t);
        tr.e1.push_back(std::norm(s.e1));
        tr.e2.push_back(std::norm(s.e2));
        tr.h.push_back(h);
        take_snapshots(step);
        const double res = std::norm(s.e1) + std::norm(s.e2);
        if (s.t >= t_min && res < cfg.settle_threshold && detail::incoming_norm(s, g) < 1e-14
            && std::all_of(snap.begin(), snap.end(), [&](std::size_t k) { return k <= step; }))
            break;
    }
    tr.steps = step;
    tr.t_final = s.t;
    tr.residual = std::norm(s.e1) + std::norm(s.e2) + detail::incoming_norm(s, g);
    return tr;
}

} // namespace

StorageReport run_storage(const EndCouplingRun& cfg)
{
    if (!cfg.schedule.has_hold())
        throw ContractError("no hold phase");
    const Grid1D& g = cfg.grid;
    const Segment gap = cfg.schedule.hold_gap();
    const double ramp = cfg.schedule.ramp_time();

    EndTrace tr = run_end(cfg, gap.t_end + ramp);

    StorageReport r;
    r.steps = tr.steps;
    r.hold_time = gap.t_end - gap.t_start;
    r.split_time = gap.t_end - 0.5 * ramp;
    r.dissipated = tr.dissipated;
    r.residual = tr.residual;
    r.escaped = tr.escaped;

    const std::size_t n = tr.out.size();
    std::vector<double> refl(n, 0.0), retr(n, 0.0);
    r.output_power.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = std::norm(tr.out[k]) * g.dx();
        r.output_power[k] = p;
        (tr.times[k] <= r.split_time ? refl[k] : retr[k]) = p;
    }
    for (std::size_t k = 0; k < n; ++k) {
        r.reflected_fraction += refl[k];
        r.retrieved_fraction += retr[k];
    }
    r.ledger_error = std::abs(r.reflected_fraction + r.retrieved_fraction + r.residual + r.dissipated
                              - total_norm(cfg.initial, g));

    // hold plateau: h_e identically zero over whole steps
    const double p0 = gap.t_start + 0.5 * ramp;
    const double p1 = gap.t_end - 0.5 * ramp;
    bool have_ref = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = tr.times[k] - g.dt();
        if (t0 < p0 || tr.times[k] > p1)
            continue;
        if (!have_ref) {
            r.stored_norm = tr.e2[k];
            have_ref = true;
            continue;
        }
        if (r.stored_norm > 0.0)
            r.hold_e2_drift = std::max(r.hold_e2_drift, std::abs(tr.e2[k] - r.stored_norm) / r.stored_norm);
    }

    auto time_centroid = [&](const std::vector<double>& p) {
        double w = 0.0, wt = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            w += p[k];
            wt += p[k] * tr.times[k];
        }
        return w > 0.0 ? wt / w : 0.0;
    };
    r.reflected_centroid_t = time_centroid(refl);
    r.retrieved_centroid_t = time_centroid(retr);
    const double half = 3.0 * pulse_width(cfg.initial.phi_T, g) / g.v_g();
    auto in_window = [&](const std::vector<double>& p, double c) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(tr.times[k] - c) <= half)
                s += p[k];
        return s;
    };
    if (r.retrieved_fraction > 0.0)
        r.overlap = std::max(in_window(refl, r.retrieved_centroid_t), in_window(retr, r.reflected_centroid_t));

    r.times = std::move(tr.times);
    r.e1_series = std::move(tr.e1);
    r.e2_series = std::move(tr.e2);
    r.h_series = std::move(tr.h);
    r.snapshots = std::move(tr.snapshots);
    return r;
}

DelayReport run_end_slowing(const EndCouplingRun& cfg)
{
    if (cfg.schedule.max_abs_level() > 0.0) {
        const double need = min_slowing_width(cfg.params, cfg.schedule.max_abs_level(), cfg.grid.v_g());
        if (pulse_width(cfg.initial.phi_T, cfg.grid) < need * (1.0 - 1e-9))
            throw ContractError("pulse not narrowband: tau below v_g / min(h_e^2/kappa1', kappa1')");
    }
    EndTrace tr = run_end(cfg, 0.0);
    detail::EmissionRecord rec;
    rec.out_T = std::move(tr.out);
    rec.dissipated = tr.dissipated;
    rec.escaped = tr.escaped;
    rec.residual = tr.residual;
    rec.steps = tr.steps;
    rec.t_final = tr.t_final;
    rec.snapshots = std::move(tr.snapshots);
    return detail::make_delay_report(cfg.initial, cfg.grid, std::move(rec));
}

void write_series_csv(const std::string& path, const StorageReport& report)
{
    CsvWriter csv(path, {"t", "abs_e1_sq", "abs_e2_sq", "h_e"});
    for (std::size_t k = 0; k < report.times.size(); ++k)
        csv.row({report.times[k], report.e1_series[k], report.e2_series[k], report.h_series[k]});
}

} // namespace eitsim

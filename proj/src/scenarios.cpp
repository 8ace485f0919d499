#include "eitsim/scenarios.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "eitsim/csv.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/oracle_full.hpp"
#include "eitsim/scatter_end.hpp"
#include "eitsim/scatter_side.hpp"
#include "eitsim/steady_state.hpp"
#include "eitsim/svg.hpp"

namespace eitsim {

std::size_t sweep_threads()
{
    if (const char* env = std::getenv("EIT_SIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

class Outputs {
public:
    Outputs(const std::string& dir, std::string prefix, ScenarioResult& result)
        : dir_(dir), prefix_(std::move(prefix)), result_(result)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create output directory " + dir + ": " + ec.message());
    }

    std::string path(const std::string& suffix)
    {
        const std::string p = (dir_ / (prefix_ + suffix)).string();
        result_.files.push_back(p);
        return p;
    }

private:
    std::filesystem::path dir_;
    std::string prefix_;
    ScenarioResult& result_;
};

std::string fmt(double v)
{
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k)
        v[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return v;
}

void run_spectrum(const ExperimentConfig& c, Outputs& out, bool svg, ScenarioResult& res)
{
    const auto& s = c.spectrum;
    const double unit = s.relative_to_kappa1_prime ? c.params.kappa1_prime() : c.params.kappa1;
    const std::vector<double> grid = linspace(s.detuning_min * unit, s.detuning_max * unit, s.points);
    std::vector<PlotSeries> series;
    CsvWriter summary(out.path("_summary.csv"), {"h_e", "power_T_at_zero", "window_fwhm"});
    for (std::size_t i = 0; i < s.h_e.size(); ++i) {
        const double h = s.h_e[i] * unit;
        const auto pts = spectrum_sweep(c.params, h, grid);
        CsvWriter csv(out.path("_h" + std::to_string(i) + ".csv"), {"detuning", "power_T", "phase", "tau_g"});
        PlotSeries ps;
        ps.label = "h_e = " + fmt(s.h_e[i]);
        for (const auto& p : pts) {
            csv.row({p.detuning / unit, p.power_T, p.phase, p.tau_g * unit});
            ps.x.push_back(p.detuning / unit);
            ps.y.push_back(p.power_T);
        }
        series.push_back(std::move(ps));
        const double t0 = std::norm(steady_amplitude(c.params, h, 0.0));
        double width = std::numeric_limits<double>::quiet_NaN();
        if (t0 > 1e-12)
            width = transparency_fwhm(c.params, h) / unit;
        summary.row({s.h_e[i], t0, width});
        res.summary.push_back("h_e=" + fmt(s.h_e[i]) + " T(0)=" + fmt(t0) + " window_fwhm=" + fmt(width));
    }
    if (svg) {
        const std::string u = s.relative_to_kappa1_prime ? "kappa1'" : "kappa1";
        write_text_file(out.path(".svg"), emit_svg(series, {"detuning / " + u, "transmission T", "Transmission spectrum"}));
    }
}

void run_delay_curve(const ExperimentConfig& c, Outputs& out, bool svg, ScenarioResult& res)
{
    const auto& d = c.delay_curve;
    const double unit = d.relative_to_kappa1_prime ? c.params.kappa1_prime() : c.params.kappa1;
    const auto hs = linspace(d.h_min, d.h_max, d.points);
    CsvWriter csv(out.path(".csv"), {"h_e", "tau_g_numeric", "tau_g_closed"});
    PlotSeries num{{}, {}, "numeric"}, closed{{}, {}, "closed form"};
    double best = -std::numeric_limits<double>::infinity(), best_h = 0.0;
    for (double hr : hs) {
        const double h = hr * unit;
        const double tn = group_delay_numeric(c.params, h, d.detuning * unit, 1e-3 * c.params.kappa1_prime());
        double tc = std::numeric_limits<double>::quiet_NaN();
        if (c.params.delta == 0.0)
            tc = group_delay_closed(c.params, h);
        csv.row({hr, tn * unit, tc * unit});
        num.x.push_back(hr);
        num.y.push_back(tn * unit);
        closed.x.push_back(hr);
        closed.y.push_back(tc * unit);
        if (tn > best) {
            best = tn;
            best_h = hr;
        }
    }
    res.summary.push_back("max tau_g=" + fmt(best * unit) + " at h_e=" + fmt(best_h));
    if (svg) {
        const std::string u = d.relative_to_kappa1_prime ? "kappa1'" : "kappa1";
        write_text_file(out.path(".svg"),
                        emit_svg({num, closed}, {"h_e / " + u, "group delay x " + u, "Group delay at resonance"}));
    }
}

void write_spectrum(const std::string& path, const std::vector<SpectrumSample>& spec, double k_max)
{
    CsvWriter csv(path, {"k", "detuning", "power"});
    for (const auto& s : spec)
        if (std::abs(s.k) <= k_max)
            csv.row({s.k, s.detuning, s.power});
}

void run_slow(const ExperimentConfig& c, Outputs& out, bool svg, ScenarioResult& res)
{
    const Grid1D g = c.make_grid();
    const auto& s = c.slow;
    const auto reports = parallel_map<DelayReport>(
        s.h_e.size(),
        [&](std::size_t i) {
            const auto sched = CouplingSchedule::constant(s.h_e[i]);
            if (s.geometry == Geometry::side) {
                SideCouplingRun run{c.params, g, sched, gaussian_pulse(g, c.pulse.center, c.pulse.tau, c.pulse.k_offset, true),
                                    s.snapshot_times, s.settle_threshold};
                return run_slowing(run);
            }
            EndCouplingRun run{c.params, g, sched, std::numbers::pi, default_switch_sharpness,
                               gaussian_pulse(g, c.pulse.center, c.pulse.tau, c.pulse.k_offset), s.snapshot_times,
                               s.settle_threshold};
            return run_end_slowing(run);
        },
        sweep_threads());

    const double T = c.pulse.tau / g.v_g();
    CsvWriter summary(out.path("_summary.csv"), {"h_e", "delay", "delay_over_T", "retention", "reflected",
                                                 "dissipated", "residual", "fwhm_ratio"});
    std::vector<PlotSeries> profiles;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        summary.row({s.h_e[i], r.delay, r.delay / T, r.retention, r.reflected, r.dissipated, r.residual, r.fwhm_ratio});
        res.summary.push_back("h_e=" + fmt(s.h_e[i]) + " delay/T=" + fmt(r.delay / T) + " retention=" + fmt(r.retention)
                              + " fwhm_ratio=" + fmt(r.fwhm_ratio));
        const std::string tag = "_" + std::to_string(i);
        {
            CsvWriter csv(out.path(tag + "_output.csv"), {"x", "re_phiT", "im_phiT", "re_phiR", "im_phiR"});
            for (std::size_t k = 0; k < r.transmitted.size(); ++k)
                csv.row({r.transmitted_x[k], r.transmitted[k].real(), r.transmitted[k].imag(), 0.0, 0.0});
        }
        const double k_max = 8.0 / c.pulse.tau;
        write_spectrum(out.path(tag + "_spectrum_in.csv"), r.input_spectrum, k_max);
        write_spectrum(out.path(tag + "_spectrum_out.csv"), r.output_spectrum, k_max);
        for (std::size_t k = 0; k < r.snapshots.size(); ++k)
            write_snapshot_csv(out.path(tag + "_snap_" + std::to_string(k) + ".csv"), r.snapshots[k].state, g);

        // output pulse shifted back by the free propagation distance
        PlotSeries ps;
        ps.label = "h_e = " + fmt(s.h_e[i]);
        const double shift = r.free_centroid - r.input_centroid;
        for (std::size_t k = 0; k < r.transmitted.size(); ++k) {
            const double x = r.transmitted_x[k] - shift;
            if (std::abs(x - c.pulse.center) <= 6.0 * c.pulse.tau) {
                ps.x.push_back((x - c.pulse.center) / c.pulse.tau);
                ps.y.push_back(std::norm(r.transmitted[k]));
            }
        }
        profiles.push_back(std::move(ps));
    }
    if (svg) {
        PlotSeries in{{}, {}, "input"};
        const auto init = gaussian_pulse(g, c.pulse.center, c.pulse.tau, c.pulse.k_offset);
        for (std::size_t j = 0; j < init.phi_T.size(); ++j) {
            const double x = g.position(j);
            if (std::abs(x - c.pulse.center) <= 6.0 * c.pulse.tau) {
                in.x.push_back((x - c.pulse.center) / c.pulse.tau);
                in.y.push_back(std::norm(init.phi_T[j]));
            }
        }
        profiles.insert(profiles.begin(), in);
        write_text_file(out.path(".svg"), emit_svg(profiles, {"(x - v_g t - x_p) / tau", "|phi|^2", "Transmitted pulse vs free reference"}));
    }
}

void run_store(const ExperimentConfig& c, Outputs& out, bool svg, ScenarioResult& res)
{
    const Grid1D g = c.make_grid();
    const auto& s = c.store;
    EndCouplingRun run{c.params, g, c.schedule, s.phase_phi, s.switch_sharpness,
                       gaussian_pulse(g, c.pulse.center, c.pulse.tau, c.pulse.k_offset), s.snapshot_times,
                       s.settle_threshold};
    const StorageReport r = run_storage(run);
    write_series_csv(out.path("_series.csv"), r);
    {
        CsvWriter csv(out.path("_output.csv"), {"t", "power"});
        for (std::size_t k = 0; k < r.times.size(); ++k)
            csv.row({r.times[k], r.output_power[k] / g.dt()});
    }
    {
        CsvWriter csv(out.path("_summary.csv"), {"reflected_fraction", "retrieved_fraction", "residual", "dissipated",
                                                 "ledger_error", "stored_norm", "hold_time", "hold_e2_drift", "overlap"});
        csv.row({r.reflected_fraction, r.retrieved_fraction, r.residual, r.dissipated, r.ledger_error, r.stored_norm,
                 r.hold_time, r.hold_e2_drift, r.overlap});
    }
    for (std::size_t k = 0; k < r.snapshots.size(); ++k)
        write_snapshot_csv(out.path("_snap_" + std::to_string(k) + ".csv"), r.snapshots[k].state, g);
    res.summary.push_back("reflected=" + fmt(r.reflected_fraction) + " retrieved=" + fmt(r.retrieved_fraction)
                          + " dissipated=" + fmt(r.dissipated) + " ledger_error=" + fmt(r.ledger_error));
    if (svg) {
        auto peak_norm = [](std::vector<double> v) {
            double m = 0.0;
            for (double x : v)
                m = std::max(m, x);
            if (m > 0.0)
                for (double& x : v)
                    x /= m;
            return v;
        };
        std::vector<PlotSeries> series{{r.times, peak_norm(r.e1_series), "|e1|^2 (normalized)"},
                                       {r.times, peak_norm(r.e2_series), "|e2|^2 (normalized)"},
                                       {r.times, peak_norm(r.output_power), "output (normalized)"},
                                       {r.times, peak_norm(r.h_series), "h_e(t) / max"}};
        write_text_file(out.path(".svg"), emit_svg(series, {"t kappa1", "normalized", "Storage and release"}));
    }
}

void run_oracle(const ExperimentConfig& c, Outputs& out, bool svg, ScenarioResult& res)
{
    const auto& o = c.oracle;
    const auto rows = parallel_map<OracleRow>(
        o.ratios.size(), [&](std::size_t i) { return oracle_point(o.g, o.ratios[i]); }, sweep_threads());
    std::vector<double> inv, amp, exc;
    {
        CsvWriter csv(out.path("_scan.csv"),
                      {"ratio", "h_e", "period_full", "period_eff", "amplitude_error", "excited_max"});
        for (const auto& r : rows) {
            csv.row({r.ratio, r.h_e, r.period_full, r.period_eff, r.amplitude_error, r.excited_max});
            inv.push_back(1.0 / r.ratio);
            amp.push_back(r.amplitude_error);
            exc.push_back(r.excited_max);
            res.summary.push_back("Delta_a/g=" + fmt(r.ratio) + " period_full/period_eff=" + fmt(r.period_full / r.period_eff)
                                  + " amplitude_error=" + fmt(r.amplitude_error) + " excited_max=" + fmt(r.excited_max));
        }
    }
    const double s_amp = loglog_slope(inv, amp);
    const double s_exc = loglog_slope(inv, exc);
    {
        CsvWriter csv(out.path("_summary.csv"), {"slope_amplitude", "slope_excited"});
        csv.row({s_amp, s_exc});
    }
    res.summary.push_back("slope amplitude=" + fmt(s_amp) + " slope excited=" + fmt(s_exc));

    SystemParams p;
    p.g1 = o.g;
    p.g2 = o.g;
    p.delta_a = o.comparison_ratio * o.g;
    const double t_max = 2.0 * effective_rabi_period(p);
    write_comparison_csv(out.path("_comparison.csv"), p, t_max, o.comparison_samples);
    if (svg) {
        PlotSeries a{inv, amp, "amplitude error"}, b{inv, exc, "max |c_e|^2"};
        for (auto* ps : {&a, &b})
            for (std::size_t k = 0; k < ps->x.size(); ++k) {
                ps->x[k] = std::log10(ps->x[k]);
                ps->y[k] = std::log10(ps->y[k]);
            }
        write_text_file(out.path(".svg"), emit_svg({a, b}, {"log10(g / Delta_a)", "log10(error)", "Elimination error scaling"}));
    }
}

} // namespace

ScenarioResult run_scenario(const ExperimentConfig& config, const std::string& out_dir, bool svg)
{
    ScenarioResult res;
    Outputs out(out_dir, config.output_prefix(), res);
    const bool plot = svg || config.outputs.svg;
    switch (config.scenario) {
    case Scenario::spectrum: run_spectrum(config, out, plot, res); break;
    case Scenario::delay_curve: run_delay_curve(config, out, plot, res); break;
    case Scenario::slow: run_slow(config, out, plot, res); break;
    case Scenario::store: run_store(config, out, plot, res); break;
    case Scenario::oracle: run_oracle(config, out, plot, res); break;
    }
    return res;
}

} // namespace eitsim

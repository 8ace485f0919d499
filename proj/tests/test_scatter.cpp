#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eitsim/errors.hpp"
#include "eitsim/scatter_end.hpp"
#include "eitsim/scatter_side.hpp"
#include "eitsim/steady_state.hpp"
#include "support.hpp"

using namespace eitsim;

namespace {

SystemParams lossless()
{
    SystemParams p;
    p.kappa1 = 0.0;
    p.kappa2 = 0.0;
    p.kappa_ex = 1.0;
    return p;
}

// h_e sweeping on and off during the run
CouplingSchedule wobble()
{
    std::vector<Segment> segs;
    for (int k = 0; k < 40; ++k)
        segs.push_back({10.0 * k, 10.0 * k + 5.0, 0.3 + 0.1 * (k % 7)});
    return CouplingSchedule(segs, 1.0);
}

} // namespace

TEST_CASE("side: no coupling means exact translation")
{
    SystemParams p;
    p.kappa_ex = 0.0;
    const Grid1D g(2048, 1500, 2.0);
    const auto s0 = gaussian_pulse(g, 500.0, 60.0, 0.05, true);
    SideIntegrator integ(p, g);
    WaveState s = s0;
    for (int k = 0; k < 300; ++k)
        integ.step(s, 0.4);
    for (std::size_t j = 300; j < g.n_cells(); ++j)
        CHECK(s.phi_T[j] == s0.phi_T[j - 300]);
    CHECK(s.t == doctest::Approx(300 * g.dt()));
}

TEST_CASE("side: lossless evolution conserves norm over 1e4 steps")
{
    const Grid1D g(24576, 12288, 2.0);
    const auto s0 = gaussian_pulse(g, 11500.0, 150.0, 0.0, true);
    SideIntegrator integ(lossless(), g);
    const auto sched = wobble();
    WaveState s = s0;
    double escaped = 0.0;
    for (int k = 0; k < 10000; ++k)
        escaped += integ.step(s, sched(s.t + 0.5 * g.dt())).escaped;
    CHECK(std::abs(total_norm(s, g) + escaped - 1.0) < 1e-6);
    CHECK(escaped < 1e-12);
}

TEST_CASE("side: step_side advances one dt")
{
    const Grid1D g(256, 150, 1.0);
    auto s = gaussian_pulse(g, 60.0, 10.0, 0.0, true);
    const auto n = step_side(s, SystemParams{}, g, 0.5);
    CHECK(n.t == doctest::Approx(g.dt()));
    CHECK(n.phi_T[61] == s.phi_T[60]);
    s.phi_R.reset();
    CHECK_THROWS_AS(step_side(s, SystemParams{}, g, 0.5), ContractError);
}

TEST_CASE("side: divergence is reported")
{
    const Grid1D g(256, 150, 1.0);
    auto s = gaussian_pulse(g, 60.0, 10.0, 0.0, true);
    s.e1 = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    SideIntegrator integ(SystemParams{}, g);
    CHECK_THROWS_WITH_AS(integ.step(s, 0.0), "integration diverged", NumericError);
}

TEST_CASE("side: per-component response matches the two-port steady state")
{
    SystemParams p;
    p.kappa2 = 0.02;
    p.v_g = 20.0;
    const Grid1D g(2048, 300, p.v_g);
    for (double hr : {0.0, 0.25, 1.0}) {
        const double h = hr * p.kappa1_prime();
        const auto init = gaussian_pulse(g, 150.0, 25.0, 0.0, true);
        SideIntegrator integ(p, g);
        const auto r = testing::drive(integ, init, g, h);
        double worst = 0.0;
        for (const auto& ts : testing::transfer(r, init, g, p.delta_in_prime(), 0.9))
            worst = std::max(worst, std::abs(ts.ratio - testing::side_transmission(p, h, ts.detuning)));
        CAPTURE(hr);
        CHECK(worst < 0.02);
    }
}

TEST_CASE("side: norm ledger")
{
    SystemParams p;
    p.kappa2 = 0.05;
    p.v_g = 8.0;
    const Grid1D g(4096, 1600, p.v_g);
    SideCouplingRun run{p, g, CouplingSchedule::constant(0.8), gaussian_pulse(g, 600.0, 80.0, 0.0, true), {}, 1e-10};
    const auto r = run_slowing(run);
    CHECK(r.retention + r.reflected + r.dissipated + r.residual == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.reflected > 0.0);
    CHECK(r.dissipated > 0.0);
}

TEST_CASE("side: delay small for strong coupling, narrowband precondition")
{
    SystemParams p;
    p.v_g = 3.75;
    const Grid1D g(4096, 2100, p.v_g);
    auto run_h = [&](double h) {
        SideCouplingRun run{p, g, CouplingSchedule::constant(h), gaussian_pulse(g, 1000.0, 200.0, 0.0, true), {}, 1e-4};
        return run_slowing(run);
    };
    const auto slow = run_h(0.25);
    const auto fast = run_h(1.0);
    CHECK(slow.delay > 0.0);
    CHECK(fast.delay < 0.2 * slow.delay);
    CHECK(slow.fwhm_ratio < 1.0);

    SideCouplingRun bad{p, g, CouplingSchedule::constant(0.05), gaussian_pulse(g, 1000.0, 200.0, 0.0, true), {}, 1e-4};
    CHECK_THROWS_AS(run_slowing(bad), ContractError);
}

TEST_CASE("side: narrowband delay approaches the steady-state phase slope")
{
    SystemParams p;
    p.kappa2 = 0.0;
    p.v_g = 10.0;
    const double h = 1.0;
    const Grid1D g(32768, 16000, p.v_g);
    SideCouplingRun run{p, g, CouplingSchedule::constant(h), gaussian_pulse(g, 6000.0, 1200.0, 0.0, true), {}, 1e-12};
    const auto r = run_slowing(run);
    const double e = 1e-4;
    const double slope = -std::arg(testing::side_transmission(p, h, e) / testing::side_transmission(p, h, -e)) / (2 * e);
    CHECK(r.delay == doctest::Approx(slope).epsilon(0.15));
}

TEST_CASE("side: snapshots")
{
    SystemParams p;
    p.v_g = 5.0;
    const Grid1D g(2048, 1200, p.v_g);
    SideCouplingRun run{p, g, CouplingSchedule::constant(1.0), gaussian_pulse(g, 500.0, 100.0, 0.0, true), {0.0, 50.0}, 1e-4};
    const auto r = run_slowing(run);
    REQUIRE(r.snapshots.size() == 2);
    CHECK(r.snapshots[0].state.phi_T == run.initial.phi_T);
    CHECK(r.snapshots[1].t == 50.0);
    CHECK(r.snapshots[1].state.t == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("end: uncoupled pass picks up the terminating phase")
{
    SystemParams p;
    p.kappa_ex = 0.0;
    const Grid1D g(1024, 500, 1.0);
    const double phi = 2.1;
    EndIntegrator integ(p, g, phi);
    double sum = 0.0;
    for (double d : integ.phase_increments())
        sum += d;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    const auto s0 = gaussian_pulse(g, 200.0, 30.0);
    WaveState s = s0;
    for (int k = 0; k < 600; ++k)
        integ.step(s, 0.0);
    for (std::size_t j = 600; j < g.n_cells(); ++j)
        CHECK(std::abs(s.phi_T[j] - std::polar(1.0, phi) * s0.phi_T[j - 600]) < 1e-14);
}

TEST_CASE("end: decoupled second resonator stays empty")
{
    SystemParams p;
    p.v_g = 5.0;
    const Grid1D g(2048, 1200, p.v_g);
    EndCouplingRun run{p, g, CouplingSchedule::constant(0.0), std::numbers::pi, 0.5,
                       gaussian_pulse(g, 600.0, 100.0), {}, 1e-12};
    const auto r = run_end_slowing(run);
    CHECK(r.retention > 0.0);
    EndIntegrator integ(p, g, std::numbers::pi);
    WaveState s = run.initial;
    double e1_max = 0.0;
    for (int k = 0; k < 1500; ++k) {
        integ.step(s, 0.0);
        CHECK(s.e2 == cplx{0.0});
        e1_max = std::max(e1_max, std::norm(s.e1));
    }
    CHECK(e1_max > 1e-3);
}

TEST_CASE("end: per-component response reproduces the driven steady state")
{
    SystemParams p;
    p.kappa2 = 0.02;
    p.v_g = 20.0;
    const Grid1D g(2048, 300, p.v_g);
    for (double hr : {0.0, 0.25, 1.0}) {
        const double h = hr * p.kappa1_prime();
        const auto init = gaussian_pulse(g, 150.0, 25.0);
        EndIntegrator integ(p, g, std::numbers::pi);
        const auto r = testing::drive(integ, init, g, h);
        double worst = 0.0;
        for (const auto& ts : testing::transfer(r, init, g, p.delta_in_prime(), 0.9))
            worst = std::max(worst, std::abs(ts.ratio - steady_amplitude(p, h, ts.detuning)));
        CAPTURE(hr);
        CHECK(worst < 0.02);
    }
}

TEST_CASE("end: lossless conservation under a time-varying schedule")
{
    const Grid1D g(24576, 12288, 2.0);
    EndIntegrator integ(lossless(), g, std::numbers::pi);
    const auto sched = wobble();
    WaveState s = gaussian_pulse(g, 11500.0, 150.0);
    double escaped = 0.0;
    for (int k = 0; k < 10000; ++k)
        escaped += integ.step(s, sched(s.t + 0.5 * g.dt())).escaped;
    CHECK(std::abs(total_norm(s, g) + escaped - 1.0) < 1e-6);
}

namespace {

EndCouplingRun storage_run(double kappa2, double hold)
{
    SystemParams p;
    p.kappa2 = kappa2;
    p.v_g = 10.0;
    const Grid1D g(4096, 1200, p.v_g);
    const CouplingSchedule s({{20.0, 60.0, 2.0}, {60.0 + hold, 60.0 + hold + 300.0, 2.0}});
    return {p, g, s, std::numbers::pi, 0.5, gaussian_pulse(g, 600.0, 100.0), {}, 1e-12};
}

} // namespace

TEST_CASE("end: storage ledger, hold constancy and separation")
{
    const auto r = run_storage(storage_run(0.0, 80.0));
    CHECK(r.ledger_error < 1e-6);
    CHECK(r.hold_e2_drift < 1e-10);
    CHECK(r.stored_norm > 0.0);
    CHECK(r.retrieved_fraction > 0.0);
    CHECK(r.retrieved_centroid_t > r.reflected_centroid_t);
    CHECK(r.overlap < 1e-3);
    CHECK(r.hold_time == 80.0);
    CHECK(r.e1_series.size() == r.times.size());
}

TEST_CASE("end: storage time dependence")
{
    const auto a = run_storage(storage_run(0.0, 80.0));
    const auto b = run_storage(storage_run(0.0, 160.0));
    CHECK(b.retrieved_fraction == doctest::Approx(a.retrieved_fraction).epsilon(1e-6));

    const double k2 = 0.004;
    const auto c = run_storage(storage_run(k2, 80.0));
    const auto d = run_storage(storage_run(k2, 160.0));
    CHECK(d.retrieved_fraction / c.retrieved_fraction == doctest::Approx(std::exp(-2.0 * k2 * 80.0)).epsilon(1e-3));
}

TEST_CASE("end: storage needs a hold")
{
    auto run = storage_run(0.0, 80.0);
    run.schedule = CouplingSchedule::constant(2.0);
    CHECK_THROWS_WITH_AS(run_storage(run), "no hold phase", ContractError);
    CHECK_THROWS_AS(EndIntegrator(SystemParams{}, run.grid, 7.0), ContractError);
    CHECK_THROWS_AS(EndIntegrator(SystemParams{}, run.grid, 1.0, 0.0), ContractError);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "eitsim/errors.hpp"
#include "eitsim/steady_state.hpp"
#include "support.hpp"

using namespace eitsim;

namespace {

SystemParams critical()
{
    SystemParams p;
    p.kappa1 = 1.0;
    p.kappa_ex = 1.0;
    return p;
}

} // namespace

TEST_CASE("steady amplitude agrees with the linear-solve oracle")
{
    SystemParams p = critical();
    for (double k2 : {0.0, 0.03, 0.4})
        for (double delta : {0.0, 0.2, -0.7})
            for (double h : {0.1, 0.5, 1.3})
                for (double D = -3.0; D <= 3.0; D += 0.0625) {
                    p.kappa2 = k2;
                    p.delta = delta;
                    if (k2 == 0.0 && std::abs(D + delta) < 1e-12 && h == 0.0)
                        continue;
                    const cplx want = testing::end_response(p, h, D);
                    CHECK(std::abs(steady_amplitude(p, h, D) - want) < 1e-12);
                }
}

TEST_CASE("steady amplitude limits")
{
    SystemParams p = critical();
    // single Lorentzian dip, complete extinction at critical coupling
    CHECK(std::abs(steady_amplitude(p, 0.0, 0.0)) < 1e-15);
    CHECK(std::abs(steady_amplitude(p, 0.0, 0.7) - (-1.0 + 2.0 / cplx(2.0, 0.7))) < 1e-15);
    // transparency at resonance
    CHECK(std::abs(steady_amplitude(p, 0.5, 0.0) - cplx(-1.0)) < 1e-12);
    // no external coupling: plain reflection
    p.kappa_ex = 0.0;
    CHECK(std::abs(steady_amplitude(p, 0.5, 0.3) - cplx(-1.0)) < 1e-15);
    // lossless resonators: unit modulus
    p = critical();
    p.kappa1 = 0.0;
    p.kappa2 = 0.0;
    for (double D = -2.0; D <= 2.0; D += 0.1)
        CHECK(std::abs(steady_amplitude(p, 0.3, D + 0.013)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic derivative matches central differences")
{
    SystemParams p = critical();
    p.kappa2 = 0.05;
    p.delta = 0.1;
    const double e = 1e-6;
    for (double D : {-1.0, -0.2, 0.0, 0.15, 0.9}) {
        const cplx fd = (steady_amplitude(p, 0.4, D + e) - steady_amplitude(p, 0.4, D - e)) / (2.0 * e);
        CHECK(std::abs(steady_amplitude_derivative(p, 0.4, D) - fd) < 1e-6);
    }
}

TEST_CASE("closed-form group delay")
{
    const SystemParams p = critical();
    const double kp = p.kappa1_prime();
    CHECK(kp * group_delay_closed(p, 0.25 * kp) == 16.0);
    const double num = group_delay_numeric(p, 0.25 * kp, 0.0, 1e-3 * kp);
    CHECK(kp * num == doctest::Approx(16.0).epsilon(5e-3));
    // closed form tracks 2 kappa_ex / h^2 at kappa2 = 0
    for (double h : {0.2, 0.7, 1.5})
        CHECK(group_delay_closed(p, h) == doctest::Approx(2.0 * p.kappa_ex / (h * h)).epsilon(1e-14));

    SystemParams d = p;
    d.delta = 0.1;
    CHECK_THROWS_AS(group_delay_closed(d, 0.5), ContractError);
}

TEST_CASE("numeric delay refuses the extinction point")
{
    const SystemParams p = critical();
    CHECK_THROWS_AS(group_delay_numeric(p, 0.0, 0.0, 1e-3), DomainError);
    CHECK_THROWS_AS(group_delay_numeric(p, 0.5, 0.0, 0.0), ContractError);
}

TEST_CASE("spectrum sweep structure")
{
    const SystemParams p = critical();
    std::vector<double> grid;
    for (int k = -400; k <= 400; ++k)
        grid.push_back(0.005 * k + 0.0013);
    const auto pts = spectrum_sweep(p, 0.5, grid);
    REQUIRE(pts.size() == grid.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK(pts[k].power_T == doctest::Approx(std::norm(pts[k].amplitude_t)));
        CHECK(pts[k].power_T <= 1.0 + 1e-12);
        if (k > 0)
            CHECK(std::abs(pts[k].phase - pts[k - 1].phase) < std::numbers::pi);
    }
    std::vector<double> bad{0.0, 0.0};
    CHECK_THROWS_AS(spectrum_sweep(p, 0.5, bad), ContractError);
}

TEST_CASE("phase unwrapping")
{
    std::vector<double> ph;
    for (int k = 0; k < 100; ++k)
        ph.push_back(std::remainder(0.3 * k, 2.0 * std::numbers::pi));
    unwrap_phase(ph);
    for (int k = 0; k < 100; ++k)
        CHECK(ph[static_cast<std::size_t>(k)] == doctest::Approx(0.3 * k));
}

TEST_CASE("transparency window width")
{
    // kappa2 = 0, critical coupling: T = (h^2 - D^2)^2 / ((h^2 - D^2)^2 + 4 D^2), half power at
    // D = sqrt(1 + h^2) - 1
    const SystemParams p = critical();
    double prev = 0.0;
    for (double hr : {0.25, 0.5, 1.0}) {
        const double h = hr * p.kappa1_prime();
        const double w = transparency_fwhm(p, h);
        CHECK(w == doctest::Approx(2.0 * (std::sqrt(1.0 + h * h) - 1.0)).epsilon(1e-10));
        CHECK(w > prev);
        prev = w;
    }
    CHECK_THROWS_AS(transparency_fwhm(p, 0.0), DomainError);
}

TEST_CASE("mean-field transient settles on the steady state")
{
    SystemParams p = critical();
    p.kappa2 = 0.05;
    p.delta_in = 0.1;
    const auto tr = langevin_transient(p, CouplingSchedule::constant(0.6), 1.0, 80.0, 0.02);
    REQUIRE(!tr.empty());
    const cplx want = steady_amplitude(p, 0.6, p.delta_in_prime());
    CHECK(std::abs(tr.back().alpha_out - want) < 1e-6);

    CHECK_THROWS_AS(langevin_transient(p, CouplingSchedule::constant(0.6), 1.0, 10.0, 0.1), ContractError);
}

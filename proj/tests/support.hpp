// Helpers shared by unit and acceptance tests.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "eitsim/model.hpp"
#include "eitsim/scatter_end.hpp"
#include "eitsim/scatter_side.hpp"
#include "eitsim/wavegrid.hpp"

namespace testing {

using eitsim::cplx;

// Resonator-1 response to a unit drive, from the 2x2 steady-state equations
// [[k1' + iD, i h], [i h, k2 + i(delta + D)]] (e1, e2) = (1, 0).
inline cplx resonator_response(const eitsim::SystemParams& p, double h, double D)
{
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd A;
    A << p.kappa1_prime() + i * D, i * h, i * h, p.kappa2 + i * (p.delta + D);
    Eigen::Vector2cd b(1.0, 0.0);
    return A.fullPivLu().solve(b)(0);
}

// Single-port (terminated line) and two-port (through line) responses.
inline cplx end_response(const eitsim::SystemParams& p, double h, double D)
{
    return -1.0 + 2.0 * p.kappa_ex * resonator_response(p, h, D);
}

inline cplx side_transmission(const eitsim::SystemParams& p, double h, double D)
{
    return 1.0 - p.kappa_ex * resonator_response(p, h, D);
}

// Continuum Fourier amplitude sum_j f_j exp(-i k x_j) dx.
inline cplx dft_at(const std::vector<cplx>& f, const std::vector<double>& x, double dx, double k)
{
    cplx s{0.0};
    for (std::size_t j = 0; j < f.size(); ++j)
        s += f[j] * std::polar(1.0, -k * x[j]);
    return s * dx;
}

// Runs an integrator on a constant coupling until the site has emptied,
// recording the outgoing amplitude like run_slowing does (without its
// narrowband precondition, so broadband probes are allowed).
template <class Integrator>
eitsim::DelayReport drive(Integrator& integ, eitsim::WaveState s, const eitsim::Grid1D& g, double h,
                          double settle = 1e-14)
{
    eitsim::DelayReport r;
    std::vector<cplx> out;
    std::size_t steps = 0;
    while (true) {
        const auto f = integ.step(s, h);
        ++steps;
        out.push_back(f.out_T);
        r.reflected += std::norm(f.out_R) * g.dx();
        r.dissipated += f.dissipated;
        if (std::norm(s.e1) + std::norm(s.e2) < settle && eitsim::detail::incoming_norm(s, g) < 1e-14)
            break;
    }
    r.steps = steps;
    r.transmitted.assign(out.rbegin(), out.rend());
    const double x0 = g.position(g.x_resonator());
    for (std::size_t k = 0; k < out.size(); ++k) {
        r.transmitted_x.push_back(x0 + static_cast<double>(k) * g.dx());
        r.retention += std::norm(out[k]) * g.dx();
    }
    r.residual = std::norm(s.e1) + std::norm(s.e2) + eitsim::detail::incoming_norm(s, g);
    return r;
}

struct TransferSample {
    double k;
    double detuning; // effective drive detuning Delta'_in - v_g k
    cplx ratio;      // output / input Fourier amplitude
    double weight;   // input spectral power
};

// Output/input amplitude ratios for k over the band holding the central
// `fraction` of the input spectral energy.
inline std::vector<TransferSample> transfer(const eitsim::DelayReport& r, const eitsim::WaveState& init,
                                            const eitsim::Grid1D& g, double delta_in_prime, double fraction,
                                            std::size_t n_k = 121)
{
    std::vector<double> xin(init.phi_T.size());
    for (std::size_t j = 0; j < xin.size(); ++j)
        xin[j] = g.position(j);
    // undo free propagation so both profiles share the input coordinate
    std::vector<double> xout(r.transmitted_x.size());
    for (std::size_t j = 0; j < xout.size(); ++j)
        xout[j] = r.transmitted_x[j] - static_cast<double>(r.steps) * g.dx();

    const double tau = eitsim::pulse_width(init.phi_T, g);
    // |Phi|^2 ~ exp(-k^2 tau^2): central fraction lies within erfinv(fraction)/tau
    double a = 0.0, b = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        (std::erf(m) < fraction ? a : b) = m;
    }
    const double k_edge = 0.5 * (a + b) / tau;

    std::vector<TransferSample> out;
    for (std::size_t n = 0; n < n_k; ++n) {
        const double k0 = -k_edge + 2.0 * k_edge * static_cast<double>(n) / static_cast<double>(n_k - 1);
        const cplx fin = dft_at(init.phi_T, xin, g.dx(), k0);
        const cplx fout = dft_at(r.transmitted, xout, g.dx(), k0);
        out.push_back({k0, delta_in_prime - g.v_g() * k0, fout / fin, std::norm(fin)});
    }
    return out;
}

} // namespace testing

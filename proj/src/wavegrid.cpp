#include "eitsim/wavegrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "eitsim/csv.hpp"
#include "eitsim/errors.hpp"

namespace eitsim {

Grid1D::Grid1D(std::size_t n_cells, std::size_t x_resonator, double v_g, double dx, Boundary boundary)
    : n_cells_(n_cells), x_resonator_(x_resonator), v_g_(v_g), dx_(dx), dt_(dx / v_g), boundary_(boundary)
{
    if (n_cells_ < 3)
        throw ContractError("grid needs at least 3 cells");
    if (x_resonator_ == 0 || x_resonator_ + 1 >= n_cells_)
        throw ContractError("x_resonator must satisfy 0 < x0 < n_cells - 1");
    if (!(v_g_ > 0.0) || !(dx_ > 0.0) || !std::isfinite(v_g_) || !std::isfinite(dx_))
        throw ContractError("grid requires v_g > 0 and dx > 0");
}

WaveState gaussian_pulse(const Grid1D& grid, double center, double tau, double k_offset, bool two_modes)
{
    if (!(tau > 0.0))
        throw ContractError("pulse width must be > 0");
    const double x0 = grid.position(grid.x_resonator());
    if (!(center - 4.0 * tau > 0.0) || !(center + 4.0 * tau < x0))
        throw ContractError("pulse not localized: need center - 4 tau > 0 and center + 4 tau < x_resonator");

    WaveState s;
    s.phi_T.assign(grid.n_cells(), cplx{0.0});
    const double amp = std::pow(1.0 / (std::numbers::pi * tau * tau), 0.25);
    for (std::size_t j = 0; j < grid.n_cells(); ++j) {
        const double u = grid.position(j) - center;
        const double env = amp * std::exp(-u * u / (2.0 * tau * tau));
        s.phi_T[j] = env * std::polar(1.0, k_offset * u);
    }
    const double n = field_norm(s.phi_T, grid);
    const double scale = 1.0 / std::sqrt(n);
    for (auto& v : s.phi_T)
        v *= scale;
    if (two_modes)
        s.phi_R = std::vector<cplx>(grid.n_cells(), cplx{0.0});
    return s;
}

double field_norm(std::span<const cplx> field, const Grid1D& grid)
{
    double s = 0.0;
    for (const auto& v : field)
        s += std::norm(v);
    return s * grid.dx();
}

double total_norm(const WaveState& state, const Grid1D& grid)
{
    double n = field_norm(state.phi_T, grid) + std::norm(state.e1) + std::norm(state.e2);
    if (state.phi_R)
        n += field_norm(*state.phi_R, grid);
    return n;
}

double centroid(std::span<const cplx> field, const Grid1D& grid, CellRange window)
{
    window.end = std::min(window.end, field.size());
    double w = 0.0;
    double wx = 0.0;
    for (std::size_t j = window.begin; j < window.end; ++j) {
        const double p = std::norm(field[j]);
        w += p;
        wx += p * grid.position(j);
    }
    if (!(w * grid.dx() > 1e-6))
        throw DomainError("centroid window is empty");
    return wx / w;
}

double centroid(std::span<const cplx> field, const Grid1D& grid)
{
    return centroid(field, grid, {0, field.size()});
}

double pulse_width(std::span<const cplx> field, const Grid1D& grid)
{
    const double xc = centroid(field, grid);
    double m2 = 0.0;
    double w = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        const double p = std::norm(field[j]);
        m2 += p * (grid.position(j) - xc) * (grid.position(j) - xc);
        w += p;
    }
    return std::sqrt(2.0 * m2 / w);
}

std::vector<FourierSample> fourier_amplitudes(std::span<const cplx> field, const Grid1D& grid,
                                              std::size_t pad_factor)
{
    std::size_t m = 1;
    while (m < std::max<std::size_t>(1, pad_factor) * field.size())
        m <<= 1;
    std::vector<cplx> in(m, cplx{0.0});
    std::copy(field.begin(), field.end(), in.begin());
    std::vector<cplx> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);

    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(m) * grid.dx());
    std::vector<FourierSample> res(m);
    // reorder to ascending k: negative frequencies first
    const std::size_t half = m / 2;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t src = (j + half) % m;
        const auto idx = static_cast<double>(src) - (src >= half ? static_cast<double>(m) : 0.0);
        res[j] = {idx * dk, grid.dx() * out[src]};
    }
    return res;
}

std::vector<SpectrumSample> field_spectrum(std::span<const cplx> field, const Grid1D& grid,
                                           std::size_t pad_factor)
{
    const auto amps = fourier_amplitudes(field, grid, pad_factor);
    double peak = 0.0;
    for (const auto& a : amps)
        peak = std::max(peak, std::norm(a.amplitude));
    std::vector<SpectrumSample> out;
    out.reserve(amps.size());
    for (const auto& a : amps)
        out.push_back({a.k, grid.v_g() * a.k, peak > 0.0 ? std::norm(a.amplitude) / peak : 0.0});
    return out;
}

double spectral_fwhm(std::span<const SpectrumSample> spectrum)
{
    if (spectrum.size() < 3)
        throw DomainError("spectrum too short for a width");
    const auto peak_it = std::max_element(spectrum.begin(), spectrum.end(),
                                          [](const auto& a, const auto& b) { return a.power < b.power; });
    const double half = 0.5 * peak_it->power;
    const auto ip = static_cast<std::size_t>(peak_it - spectrum.begin());

    std::size_t r = ip;
    while (r + 1 < spectrum.size() && spectrum[r + 1].power > half)
        ++r;
    std::size_t l = ip;
    while (l > 0 && spectrum[l - 1].power > half)
        --l;
    if (r + 1 >= spectrum.size() || l == 0)
        throw DomainError("half maximum not bracketed by the spectrum");

    auto cross = [&](std::size_t inside, std::size_t outside) {
        const auto& a = spectrum[inside];
        const auto& b = spectrum[outside];
        return a.k + (half - a.power) * (b.k - a.k) / (b.power - a.power);
    };
    return cross(r, r + 1) - cross(l, l - 1);
}

void write_snapshot_csv(const std::string& path, const WaveState& state, const Grid1D& grid)
{
    CsvWriter csv(path, {"x", "re_phiT", "im_phiT", "re_phiR", "im_phiR"});
    for (std::size_t j = 0; j < state.phi_T.size(); ++j) {
        const cplx r = state.phi_R ? (*state.phi_R)[j] : cplx{0.0};
        csv.row({grid.position(j), state.phi_T[j].real(), state.phi_T[j].imag(), r.real(), r.imag()});
    }
}

namespace detail {

double advect(std::vector<cplx>& field, int direction)
{
    if (field.empty())
        return 0.0;
    double lost = 0.0;
    if (direction > 0) {
        lost = std::norm(field.back());
        std::move_backward(field.begin(), field.end() - 1, field.end());
        field.front() = 0.0;
    } else {
        lost = std::norm(field.front());
        std::move(field.begin() + 1, field.end(), field.begin());
        field.back() = 0.0;
    }
    return lost;
}

double apply_sponge(std::vector<cplx>& field)
{
    const std::size_t w = std::min(sponge_width, field.size() / 2);
    double removed = 0.0;
    for (std::size_t d = 0; d < w; ++d) {
        const double m = 0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(d) + 0.5) / static_cast<double>(w)));
        for (std::size_t j : {d, field.size() - 1 - d}) {
            const double before = std::norm(field[j]);
            field[j] *= m;
            removed += before - std::norm(field[j]);
        }
    }
    return removed;
}

} // namespace detail

} // namespace eitsim

// wavegrid.hpp — 1D grid, single-photon wavepackets and field measurements
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eitsim/model.hpp"

namespace eitsim {

enum class Boundary { open, sponge };

inline constexpr std::size_t sponge_width = 32;

// Uniform grid with the exact-shift property: one cell per time step, so
// v_g = dx / dt holds by construction.
class Grid1D {
public:
    Grid1D(std::size_t n_cells, std::size_t x_resonator, double v_g, double dx = 1.0,
           Boundary boundary = Boundary::open);

    std::size_t n_cells() const { return n_cells_; }
    std::size_t x_resonator() const { return x_resonator_; }
    double dx() const { return dx_; }
    double dt() const { return dt_; }
    double v_g() const { return v_g_; }
    Boundary boundary() const { return boundary_; }
    double position(std::size_t cell) const { return static_cast<double>(cell) * dx_; }

private:
    std::size_t n_cells_;
    std::size_t x_resonator_;
    double v_g_;
    double dx_;
    double dt_;
    Boundary boundary_;
};

struct WaveState {
    std::vector<cplx> phi_T;                 // through mode (or folded mode in the end geometry)
    std::optional<std::vector<cplx>> phi_R;  // reflected mode, side geometry only
    cplx e1{};
    cplx e2{};
    double t{0.0};
};

// Normalized Gaussian envelope exp(-(x-center)^2 / 2 tau^2) exp(i k_offset (x-center)).
// With two_modes the state carries a zeroed reflected mode.
WaveState gaussian_pulse(const Grid1D& grid, double center, double tau, double k_offset = 0.0,
                         bool two_modes = false);

double field_norm(std::span<const cplx> field, const Grid1D& grid);
double total_norm(const WaveState& state, const Grid1D& grid);

struct CellRange {
    std::size_t begin{0};
    std::size_t end{0}; // exclusive
};

// Intensity-weighted mean position over the window.
double centroid(std::span<const cplx> field, const Grid1D& grid, CellRange window);
double centroid(std::span<const cplx> field, const Grid1D& grid);

// rms-derived Gaussian width, tau^2 = 2 <(x - xc)^2>.
double pulse_width(std::span<const cplx> field, const Grid1D& grid);

struct FourierSample {
    double k{0.0};
    cplx amplitude{}; // dx * sum_n phi_n exp(-i k x_n)
};

// Continuum-normalized transform on a zero-padded grid, sorted by k.
std::vector<FourierSample> fourier_amplitudes(std::span<const cplx> field, const Grid1D& grid,
                                              std::size_t pad_factor = 8);

struct SpectrumSample {
    double k{0.0};
    double detuning{0.0}; // drive frequency offset v_g k
    double power{0.0};    // |amplitude|^2 normalized to unit peak
};

std::vector<SpectrumSample> field_spectrum(std::span<const cplx> field, const Grid1D& grid,
                                           std::size_t pad_factor = 8);

// Full width at half maximum in k around the global peak, linearly interpolated.
double spectral_fwhm(std::span<const SpectrumSample> spectrum);

// Writes `x,re_phiT,im_phiT,re_phiR,im_phiR`; phi_R columns are zero when absent.
void write_snapshot_csv(const std::string& path, const WaveState& state, const Grid1D& grid);

namespace detail {

// Shift right (+1) or left (-1) by one cell, feeding zeros; returns the norm
// (in cell units, without dx) that left the grid.
double advect(std::vector<cplx>& field, int direction);

// Applies the cosine-taper sponge at both ends; returns the removed norm
// (in cell units).
double apply_sponge(std::vector<cplx>& field);

} // namespace detail

} // namespace eitsim

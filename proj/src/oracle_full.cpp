#include "eitsim/oracle_full.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eitsim/csv.hpp"
#include "eitsim/errors.hpp"

namespace eitsim {

namespace {

template <int N>
class Propagator {
public:
    using Matrix = Eigen::Matrix<cplx, N, N>;
    using Vector = Eigen::Matrix<cplx, N, 1>;

    explicit Propagator(const Matrix& H) : es_(H) {}

    Vector apply(const Vector& v, double t) const
    {
        const Vector w = es_.eigenvectors().adjoint() * v;
        Vector phased;
        for (int k = 0; k < N; ++k)
            phased(k) = std::polar(1.0, -es_.eigenvalues()(k) * t) * w(k);
        return es_.eigenvectors() * phased;
    }

private:
    Eigen::SelfAdjointEigenSolver<Matrix> es_;
};

double g_max(const SystemParams& p) { return std::max(std::abs(p.g1), std::abs(p.g2)); }

} // namespace

Eigen::Matrix3cd build_full_hamiltonian(const SystemParams& p)
{
    Eigen::Matrix3cd H = Eigen::Matrix3cd::Zero();
    H(0, 0) = p.delta_in;
    H(1, 1) = p.delta_in + p.delta;
    H(2, 2) = p.delta_a + p.delta_in;
    H(0, 2) = std::conj(p.g1);
    H(2, 0) = p.g1;
    H(1, 2) = std::conj(p.g2);
    H(2, 1) = p.g2;
    return H;
}

Eigen::Matrix2cd build_effective_hamiltonian(const SystemParams& p)
{
    p.validate();
    const cplx h = effective_coupling(p.g1, p.g2, p.delta_a, p.delta);
    Eigen::Matrix2cd H;
    H(0, 0) = p.delta_in + stark_shift(p.g1, p.delta_a);
    H(1, 1) = p.delta_in + p.delta + stark_shift(p.g2, p.delta_a - p.delta);
    H(1, 0) = h;
    H(0, 1) = std::conj(h);
    return H;
}

FullModelState evolve_full(const FullModelState& state, const Eigen::Matrix3cd& H, double t)
{
    return Propagator<3>(H).apply(state, t);
}

EffectiveState evolve_effective(const EffectiveState& state, const Eigen::Matrix2cd& H, double t)
{
    return Propagator<2>(H).apply(state, t);
}

EliminationError elimination_error(const SystemParams& p, double t_max, std::size_t min_samples)
{
    if (!(t_max >= 0.0))
        throw ContractError("t_max must be >= 0");
    const Propagator<3> full(build_full_hamiltonian(p));
    const Propagator<2> eff(build_effective_hamiltonian(p));
    // about 20 samples per period of the fastest (qubit) oscillation
    const double fastest = std::abs(p.delta_a) + 2.0 * g_max(p);
    const auto n = std::max<std::size_t>(min_samples, static_cast<std::size_t>(std::ceil(t_max * fastest / 0.3)) + 1);

    const FullModelState f0(1.0, 0.0, 0.0);
    const EffectiveState e0(1.0, 0.0);
    EliminationError err;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = n > 1 ? t_max * static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
        const FullModelState f = full.apply(f0, t);
        const EffectiveState e = eff.apply(e0, t);
        const EffectiveState f12 = f.head<2>();
        const cplx overlap = e.dot(f12); // <e|f>
        const cplx align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0};
        err.amplitude = std::max(err.amplitude, (f12 - align * e).norm());
        err.excited = std::max(err.excited, std::norm(f(2)));
    }
    return err;
}

double effective_rabi_period(const SystemParams& p)
{
    const double h = std::abs(effective_coupling(p.g1, p.g2, p.delta_a, p.delta));
    if (h == 0.0)
        throw DomainError("no effective coupling");
    return std::numbers::pi / h;
}

double full_rabi_period(const SystemParams& p)
{
    const Propagator<3> full(build_full_hamiltonian(p));
    const FullModelState f0(1.0, 0.0, 0.0);
    auto p2 = [&](double t) { return std::norm(full.apply(f0, t)(1)); };

    const double T = effective_rabi_period(p);
    const double fastest = std::abs(p.delta_a) + 2.0 * g_max(p);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;

    // best sample in [lo, hi] on a grid resolving the qubit oscillation, then
    // golden-section refinement on the exact evolution
    auto peak_in = [&](double lo, double hi) {
        const auto n = std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil((hi - lo) * fastest / 0.1)));
        const double dt = (hi - lo) / static_cast<double>(n);
        std::size_t best = 0;
        double best_v = -1.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double v = p2(lo + dt * static_cast<double>(k));
            if (v > best_v) {
                best_v = v;
                best = k;
            }
        }
        double a = lo + dt * (static_cast<double>(best) - 1.0), b = a + 2.0 * dt;
        double c = b - r * (b - a), d = a + r * (b - a);
        double fc = p2(c), fd = p2(d);
        for (int it = 0; it < 200 && b - a > 1e-14 * T; ++it) {
            if (fc > fd) {
                b = d; d = c; fd = fc;
                c = b - r * (b - a); fc = p2(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + r * (b - a); fd = p2(d);
            }
        }
        return 0.5 * (a + b);
    };
    const std::vector<double> peaks{peak_in(0.25 * T, 0.75 * T), peak_in(1.25 * T, 1.75 * T)};
    return peaks[1] - peaks[0];
}

OracleRow oracle_point(double g, double ratio)
{
    SystemParams p;
    p.g1 = g;
    p.g2 = g;
    p.delta_a = ratio * g;
    OracleRow row;
    row.ratio = ratio;
    row.h_e = effective_coupling(p.g1, p.g2, p.delta_a, p.delta).real();
    row.period_eff = effective_rabi_period(p);
    row.period_full = full_rabi_period(p);
    const EliminationError e = elimination_error(p, row.period_eff);
    row.amplitude_error = e.amplitude;
    row.excited_max = e.excited;
    return row;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw ContractError("slope needs two or more paired points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0))
            throw DomainError("log-log slope needs positive data");
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_comparison_csv(const std::string& path, const SystemParams& p, double t_max, std::size_t samples)
{
    if (samples < 2)
        throw ContractError("need at least two samples");
    const Propagator<3> full(build_full_hamiltonian(p));
    const Propagator<2> eff(build_effective_hamiltonian(p));
    const FullModelState f0(1.0, 0.0, 0.0);
    const EffectiveState e0(1.0, 0.0);
    CsvWriter csv(path, {"t", "p1_full", "p2_full", "pe_full", "p1_eff", "p2_eff"});
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
        const FullModelState f = full.apply(f0, t);
        const EffectiveState e = eff.apply(e0, t);
        csv.row({t, std::norm(f(0)), std::norm(f(1)), std::norm(f(2)), std::norm(e(0)), std::norm(e(1))});
    }
}

} // namespace eitsim

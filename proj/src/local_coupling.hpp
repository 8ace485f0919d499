// Local propagator at the coupling site: channel cells, e1, e2.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "eitsim/model.hpp"

namespace eitsim::detail {

// Channels = 1 (end geometry) or 2 (side geometry). Variable order is
// (channel cells..., e1, e2); channel entries are cell amplitudes times sqrt(dx).
//
// One step is the symmetric composition
//   R(dt/2) X R(dt/2)
// where R is the exact exponential of the resonator block with h_e frozen and
// X exchanges e1 with the bright channel combination, calibrated so the
// radiated amplitude decays as exp(-kappa_ex dt).
template <int Channels>
class LocalPropagator {
public:
    static constexpr int N = Channels + 2;
    using Matrix = Eigen::Matrix<cplx, N, N>;
    using Vector = Eigen::Matrix<cplx, N, 1>;

    LocalPropagator(const SystemParams& p, double dt, double delta_in_prime)
        : p_(p), dt_(dt), dprime_(delta_in_prime)
    {
        const double c = std::exp(-p.kappa_ex * dt);
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        exchange_.setIdentity();
        const int e1 = Channels;
        if constexpr (Channels == 1) {
            exchange_(0, 0) = c;
            exchange_(0, e1) = cplx(0.0, -s);
            exchange_(e1, 0) = cplx(0.0, -s);
            exchange_(e1, e1) = c;
        } else {
            const double r = 1.0 / std::sqrt(2.0);
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b)
                    exchange_(a, b) = (a == b ? 1.0 : 0.0) + 0.5 * (c - 1.0);
                exchange_(a, e1) = cplx(0.0, -s * r);
                exchange_(e1, a) = cplx(0.0, -s * r);
            }
            exchange_(e1, e1) = c;
        }
        rebuild(0.0);
    }

    const Matrix& get(double h)
    {
        if (h != h_)
            rebuild(h);
        return step_;
    }

private:
    void rebuild(double h)
    {
        const cplx i(0.0, 1.0);
        Eigen::Matrix2cd hres;
        hres << dprime_ - i * p_.kappa1, h, h, dprime_ + p_.delta - i * p_.kappa2;
        const Eigen::Matrix2cd half = (-i * hres * (0.5 * dt_)).exp();
        Matrix r = Matrix::Identity();
        r.template bottomRightCorner<2, 2>() = half;
        step_ = r * exchange_ * r;
        h_ = h;
    }

    SystemParams p_;
    double dt_;
    double dprime_;
    double h_{0.0};
    Matrix exchange_;
    Matrix step_;
};

} // namespace eitsim::detail

#include "eitsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eitsim/errors.hpp"

namespace eitsim {

double SystemParams::delta_in_prime() const
{
    if (g1 == cplx{0.0})
        return delta_in;
    return delta_in + stark_shift(g1, delta_a);
}

void SystemParams::validate() const
{
    auto require_rate = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ContractError(std::string(name) + " must be a finite rate >= 0");
    };
    require_rate(kappa1, "kappa1");
    require_rate(kappa_ex, "kappa_ex");
    require_rate(kappa2, "kappa2");
    if (!(v_g > 0.0) || !std::isfinite(v_g))
        throw ContractError("v_g must be > 0");
    if (!std::isfinite(delta) || !std::isfinite(delta_a) || !std::isfinite(delta_in))
        throw ContractError("detunings must be finite");

    const double g_max = std::max(std::abs(g1), std::abs(g2));
    if (g_max > 0.0 && std::abs(delta_a) < dispersive_ratio_min * g_max)
        throw DomainError("delta_a outside dispersive regime: |delta_a| = " + std::to_string(std::abs(delta_a)) +
                          " < " + std::to_string(dispersive_ratio_min) + " * max|g| = " +
                          std::to_string(dispersive_ratio_min * g_max));
}

cplx effective_coupling(cplx g1, cplx g2, double delta_a, double delta)
{
    if (delta_a == 0.0 || delta_a == delta)
        throw DomainError("resonant regime, elimination invalid");
    return -0.5 * (1.0 / delta_a + 1.0 / (delta_a - delta)) * g1 * std::conj(g2);
}

double stark_shift(cplx g, double delta_a)
{
    if (delta_a == 0.0)
        throw DomainError("resonant regime, elimination invalid");
    return -std::norm(g) / delta_a;
}

double squid_shift(cplx g_s, double delta_s)
{
    if (delta_s == 0.0)
        throw DomainError("resonant SQUID, dispersive shift undefined");
    if (std::isinf(delta_s))
        return 0.0;
    return -std::norm(g_s) / delta_s;
}

CouplingSchedule::CouplingSchedule(std::vector<Segment> segments, double ramp_time)
    : segments_(std::move(segments)), ramp_time_(ramp_time)
{
    if (!(ramp_time_ >= 0.0) || !std::isfinite(ramp_time_))
        throw ContractError("ramp_time must be finite and >= 0");
    if (segments_.empty())
        throw ContractError("schedule needs at least one segment");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!(s.t_end > s.t_start) || s.t_start < 0.0 || !std::isfinite(s.level))
            throw ContractError("segment " + std::to_string(i) + " must satisfy 0 <= t_start < t_end");
        if (i > 0 && s.t_start < segments_[i - 1].t_end)
            throw ContractError("segments overlap or are not time-ordered at index " + std::to_string(i));
    }

    double current = segments_.front().level;
    auto push = [&](double t, double next) {
        if (next != current)
            breaks_.push_back({t, current, next});
        current = next;
    };
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        const auto& prev = segments_[i - 1];
        const auto& s = segments_[i];
        if (prev.t_end < s.t_start) {
            push(prev.t_end, 0.0);
            push(s.t_start, s.level);
        } else {
            push(s.t_start, s.level);
        }
    }
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
        if (breaks_[i].t - breaks_[i - 1].t < ramp_time_)
            throw ContractError("level changes closer than ramp_time; ramps would overlap");
    }
}

CouplingSchedule CouplingSchedule::constant(double level)
{
    return CouplingSchedule({{0.0, 1.0, level}}, default_ramp_time);
}

double CouplingSchedule::eval(double t) const
{
    const double half = 0.5 * ramp_time_;
    double level = segments_.empty() ? 0.0 : segments_.front().level;
    for (const auto& b : breaks_) {
        if (ramp_time_ > 0.0 && t > b.t - half && t < b.t + half) {
            const double s = (t - (b.t - half)) / ramp_time_;
            return b.before + (b.after - b.before) * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
        }
        if (t >= b.t)
            level = b.after;
        else
            break;
    }
    return level;
}

double CouplingSchedule::max_abs_level() const
{
    double m = 0.0;
    for (const auto& s : segments_)
        m = std::max(m, std::abs(s.level));
    return m;
}

bool CouplingSchedule::has_hold() const
{
    bool seen_on = segments_.front().level != 0.0;
    for (const auto& b : breaks_) {
        if (seen_on && b.after == 0.0) {
            // a later switch-on completes the hold
            for (const auto& c : breaks_)
                if (c.t > b.t && c.before == 0.0 && c.after != 0.0)
                    return true;
        }
        if (b.after != 0.0)
            seen_on = true;
    }
    return false;
}

Segment CouplingSchedule::hold_gap() const
{
    bool seen_on = segments_.front().level != 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        const auto& b = breaks_[i];
        if (seen_on && b.after == 0.0) {
            for (std::size_t j = i + 1; j < breaks_.size(); ++j)
                if (breaks_[j].before == 0.0 && breaks_[j].after != 0.0)
                    return {b.t, breaks_[j].t, 0.0};
        }
        if (b.after != 0.0)
            seen_on = true;
    }
    throw ContractError("no hold phase");
}

double schedule_eval(const CouplingSchedule& schedule, double t)
{
    if (t < 0.0)
        throw ContractError("schedule_eval requires t >= 0");
    return schedule.eval(t);
}

} // namespace eitsim

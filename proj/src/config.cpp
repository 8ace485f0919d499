#include "eitsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "eitsim/errors.hpp"
#include "eitsim/scatter_side.hpp"

namespace eitsim {

using nlohmann::json;

std::string scenario_name(Scenario s)
{
    switch (s) {
    case Scenario::spectrum: return "spectrum";
    case Scenario::delay_curve: return "delay-curve";
    case Scenario::slow: return "slow";
    case Scenario::store: return "store";
    case Scenario::oracle: return "oracle";
    }
    return "spectrum";
}

Scenario parse_scenario(const std::string& name)
{
    for (Scenario s : {Scenario::spectrum, Scenario::delay_curve, Scenario::slow, Scenario::store, Scenario::oracle})
        if (scenario_name(s) == name)
            return s;
    throw ConfigError("scenario: unknown value '" + name + "'");
}

Grid1D ExperimentConfig::make_grid() const
{
    return Grid1D(grid.n_cells, grid.x_resonator, params.v_g, grid.dx, grid.boundary);
}

std::string ExperimentConfig::output_prefix() const
{
    if (!outputs.prefix.empty())
        return outputs.prefix;
    std::string s = scenario_name(scenario);
    for (char& c : s)
        if (c == '-')
            c = '_';
    return s;
}

namespace {

// Tracks which keys of an object were consumed so leftovers can be reported.
class Section {
public:
    Section(const json& j, std::string path, std::vector<std::string>& unknown)
        : j_(j), path_(std::move(path)), unknown_(unknown)
    {
        if (!j_.is_object())
            throw ConfigError(path_ + ": expected an object");
    }
    Section(const Section&) = delete;

    ~Section()
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key()))
                unknown_.push_back(name(it.key()));
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key)
    {
        used_.insert(key);
        return j_.at(key);
    }

    std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const std::string& key, double fallback)
    {
        if (!has(key))
            return fallback;
        const json& v = raw(key);
        if (!v.is_number())
            throw ConfigError(name(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            throw ConfigError(name(key) + ": must be finite");
        return d;
    }

    std::size_t count(const std::string& key, std::size_t fallback)
    {
        if (!has(key))
            return fallback;
        const json& v = raw(key);
        if (!v.is_number_unsigned())
            throw ConfigError(name(key) + ": expected a non-negative integer");
        return v.get<std::size_t>();
    }

    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key))
            return fallback;
        const json& v = raw(key);
        if (!v.is_boolean())
            throw ConfigError(name(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        if (!has(key))
            return fallback;
        const json& v = raw(key);
        if (!v.is_string())
            throw ConfigError(name(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
    {
        if (!has(key))
            return fallback;
        const json& v = raw(key);
        if (!v.is_array())
            throw ConfigError(name(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>()))
                throw ConfigError(name(key) + ": expected finite numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    cplx complex(const std::string& key, cplx fallback)
    {
        if (!has(key))
            return fallback;
        const json& v = raw(key);
        if (v.is_number())
            return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        throw ConfigError(name(key) + ": expected a number or [re, im]");
    }

    std::string scale(const std::string& key, bool relative_default, bool& relative)
    {
        const std::string s = text(key, relative_default ? "kappa1_prime" : "kappa1");
        if (s == "kappa1_prime")
            relative = true;
        else if (s == "kappa1")
            relative = false;
        else
            throw ConfigError(name(key) + ": expected 'kappa1' or 'kappa1_prime'");
        return s;
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& unknown_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& message)
{
    if (!ok)
        throw ConfigError(message);
}

// Conversion factors from SI inputs; identity for normalized documents.
struct Units {
    double rate{1.0}; // multiply a cyclic-Hz rate to get kappa_1 units
    double time{1.0}; // multiply seconds to get 1/kappa_1 units
    double velocity{1.0};
};

SystemParams read_params(Section& s, bool si, Units& u)
{
    SystemParams p;
    if (si) {
        const double k1 = s.number("kappa1", reference_kappa1_hz);
        require(k1 > 0.0, "params.kappa1: must be > 0 in SI units");
        u.rate = 1.0 / k1;
        u.time = 2.0 * std::numbers::pi * k1;
        u.velocity = 1.0 / u.time;
        p.kappa1 = 1.0;
    } else {
        p.kappa1 = s.number("kappa1", p.kappa1);
    }
    p.kappa_ex = s.number("kappa_ex", si ? 1.0 / u.rate : p.kappa_ex) * u.rate;
    p.kappa2 = s.number("kappa2", p.kappa2) * u.rate;
    p.delta = s.number("delta", p.delta) * u.rate;
    p.g1 = s.complex("g1", p.g1) * u.rate;
    p.g2 = s.complex("g2", p.g2) * u.rate;
    p.delta_a = s.number("delta_a", p.delta_a) * u.rate;
    p.delta_in = s.number("delta_in", p.delta_in) * u.rate;
    p.v_g = s.number("v_g", si ? 1.0 / u.velocity : p.v_g) * u.velocity;
    return p;
}

CouplingSchedule read_schedule(Section& s, const Units& u, std::vector<std::string>& unknown)
{
    const double ramp = s.number("ramp_time", default_ramp_time / u.time) * u.time;
    std::vector<Segment> segs;
    if (s.has("segments")) {
        const json& arr = s.raw("segments");
        require(arr.is_array(), "schedule.segments: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section seg(arr[i], "schedule.segments[" + std::to_string(i) + "]", unknown);
            Segment g;
            g.t_start = seg.number("t_start", 0.0) * u.time;
            g.t_end = seg.number("t_end", 0.0) * u.time;
            g.level = seg.number("level", 0.0) * u.rate;
            segs.push_back(g);
        }
    } else {
        segs.push_back({0.0, 1.0, 0.0});
    }
    try {
        return CouplingSchedule(segs, ramp);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("schedule: ") + e.what());
    }
}

void validate(const ExperimentConfig& c)
{
    auto wrap = [](const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(where + ": " + e.what());
        }
    };
    wrap("params", [&] { c.params.validate(); });
    wrap("grid", [&] { (void)c.make_grid(); });

    switch (c.scenario) {
    case Scenario::spectrum: {
        const auto& s = c.spectrum;
        require(!s.h_e.empty(), "spectrum.h_e: needs at least one value");
        for (double h : s.h_e)
            require(h >= 0.0, "spectrum.h_e: values must be >= 0");
        require(s.detuning_min < s.detuning_max, "spectrum.detuning_min: must be < detuning_max");
        require(s.points >= 2, "spectrum.points: must be >= 2");
        break;
    }
    case Scenario::delay_curve: {
        const auto& d = c.delay_curve;
        require(d.h_min > 0.0, "delay_curve.h_min: must be > 0");
        require(d.h_min < d.h_max, "delay_curve.h_min: must be < h_max");
        require(d.points >= 2, "delay_curve.points: must be >= 2");
        break;
    }
    case Scenario::slow: {
        const auto& s = c.slow;
        require(!s.h_e.empty(), "slow.h_e: needs at least one value");
        require(s.settle_threshold > 0.0, "slow.settle_threshold: must be > 0");
        const Grid1D g = c.make_grid();
        wrap("pulse", [&] { (void)gaussian_pulse(g, c.pulse.center, c.pulse.tau, c.pulse.k_offset); });
        for (double h : s.h_e) {
            require(h >= 0.0, "slow.h_e: values must be >= 0");
            require(c.pulse.tau >= min_slowing_width(c.params, h, c.params.v_g) * (1.0 - 1e-9),
                    "pulse.tau: must be >= v_g / min(h_e^2/kappa1', kappa1') for every slow.h_e");
        }
        for (double t : s.snapshot_times)
            require(t >= 0.0, "slow.snapshot_times: must be >= 0");
        break;
    }
    case Scenario::store: {
        const auto& s = c.store;
        require(c.schedule.has_hold(), "no hold phase");
        require(s.phase_phi >= 0.0 && s.phase_phi < 2.0 * std::numbers::pi, "store.phase_phi: must lie in [0, 2 pi)");
        require(s.switch_sharpness > 0.0, "store.switch_sharpness: must be > 0");
        require(s.settle_threshold > 0.0, "store.settle_threshold: must be > 0");
        const Grid1D g = c.make_grid();
        wrap("pulse", [&] { (void)gaussian_pulse(g, c.pulse.center, c.pulse.tau, c.pulse.k_offset); });
        for (double t : s.snapshot_times)
            require(t >= 0.0, "store.snapshot_times: must be >= 0");
        break;
    }
    case Scenario::oracle: {
        const auto& o = c.oracle;
        require(o.g > 0.0, "oracle.g: must be > 0");
        require(o.ratios.size() >= 2, "oracle.ratios: needs at least two values");
        for (double r : o.ratios)
            require(r >= dispersive_ratio_min, "oracle.ratios: each must be >= dispersive ratio 5");
        require(o.comparison_ratio >= dispersive_ratio_min, "oracle.comparison_ratio: must be >= 5");
        require(o.comparison_samples >= 2, "oracle.comparison_samples: must be >= 2");
        break;
    }
    }
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed document: ") + e.what());
    }

    ExperimentConfig c;
    std::vector<std::string> unknown;
    {
        Section root(doc, "", unknown);
        require(root.has("scenario"), "scenario: required");
        c.scenario = parse_scenario(root.text("scenario", ""));
        const std::string units = root.text("units", "normalized");
        require(units == "normalized" || units == "si", "units: expected 'normalized' or 'si'");
        const bool si = units == "si";
        Units u;

        if (root.has("params")) {
            Section s(root.raw("params"), "params", unknown);
            c.params = read_params(s, si, u);
        } else if (si) {
            u.rate = 1.0 / reference_kappa1_hz;
            u.time = 2.0 * std::numbers::pi * reference_kappa1_hz;
            u.velocity = 1.0 / u.time;
        }
        if (root.has("grid")) {
            Section s(root.raw("grid"), "grid", unknown);
            c.grid.n_cells = s.count("n_cells", c.grid.n_cells);
            c.grid.x_resonator = s.count("x_resonator", c.grid.x_resonator);
            c.grid.dx = s.number("dx", c.grid.dx);
            const std::string b = s.text("boundary", "open");
            require(b == "open" || b == "sponge", "grid.boundary: expected 'open' or 'sponge'");
            c.grid.boundary = b == "open" ? Boundary::open : Boundary::sponge;
        }
        if (root.has("pulse")) {
            Section s(root.raw("pulse"), "pulse", unknown);
            c.pulse.center = s.number("center", c.pulse.center);
            c.pulse.tau = s.number("tau", c.pulse.tau);
            c.pulse.k_offset = s.number("k_offset", c.pulse.k_offset);
        }
        if (root.has("schedule")) {
            Section s(root.raw("schedule"), "schedule", unknown);
            c.schedule = read_schedule(s, u, unknown);
        }
        if (root.has("spectrum")) {
            Section s(root.raw("spectrum"), "spectrum", unknown);
            auto& d = c.spectrum;
            s.scale("scale", d.relative_to_kappa1_prime, d.relative_to_kappa1_prime);
            d.h_e = s.numbers("h_e", d.h_e);
            d.detuning_min = s.number("detuning_min", d.detuning_min);
            d.detuning_max = s.number("detuning_max", d.detuning_max);
            d.points = s.count("points", d.points);
        }
        if (root.has("delay_curve")) {
            Section s(root.raw("delay_curve"), "delay_curve", unknown);
            auto& d = c.delay_curve;
            s.scale("scale", d.relative_to_kappa1_prime, d.relative_to_kappa1_prime);
            d.h_min = s.number("h_min", d.h_min);
            d.h_max = s.number("h_max", d.h_max);
            d.points = s.count("points", d.points);
            d.detuning = s.number("detuning", d.detuning);
        }
        if (root.has("slow")) {
            Section s(root.raw("slow"), "slow", unknown);
            auto& d = c.slow;
            const std::string geo = s.text("geometry", "side");
            require(geo == "side" || geo == "end", "slow.geometry: expected 'side' or 'end'");
            d.geometry = geo == "side" ? Geometry::side : Geometry::end;
            d.h_e = s.numbers("h_e", d.h_e);
            for (double& h : d.h_e)
                h *= u.rate;
            d.snapshot_times = s.numbers("snapshot_times", d.snapshot_times);
            for (double& t : d.snapshot_times)
                t *= u.time;
            d.settle_threshold = s.number("settle_threshold", d.settle_threshold);
        }
        if (root.has("store")) {
            Section s(root.raw("store"), "store", unknown);
            auto& d = c.store;
            d.phase_phi = s.number("phase_phi", d.phase_phi);
            d.switch_sharpness = s.number("switch_sharpness", d.switch_sharpness);
            d.snapshot_times = s.numbers("snapshot_times", d.snapshot_times);
            for (double& t : d.snapshot_times)
                t *= u.time;
            d.settle_threshold = s.number("settle_threshold", d.settle_threshold);
        }
        if (root.has("oracle")) {
            Section s(root.raw("oracle"), "oracle", unknown);
            auto& d = c.oracle;
            d.g = s.number("g", d.g / u.rate) * u.rate;
            d.ratios = s.numbers("ratios", d.ratios);
            d.comparison_ratio = s.number("comparison_ratio", d.comparison_ratio);
            d.comparison_samples = s.count("comparison_samples", d.comparison_samples);
        }
        if (root.has("outputs")) {
            Section s(root.raw("outputs"), "outputs", unknown);
            c.outputs.prefix = s.text("prefix", "");
            c.outputs.svg = s.boolean("svg", false);
        }
    }
    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        std::string msg = "unknown keys:";
        for (const auto& k : unknown)
            msg += " " + k;
        throw ConfigError(msg);
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c)
{
    auto cjson = [](cplx z) { return json::array({z.real(), z.imag()}); };
    json doc;
    doc["scenario"] = scenario_name(c.scenario);
    doc["units"] = "normalized";
    const auto& p = c.params;
    doc["params"] = {{"kappa1", p.kappa1},   {"kappa_ex", p.kappa_ex}, {"kappa2", p.kappa2},
                     {"delta", p.delta},     {"g1", cjson(p.g1)},      {"g2", cjson(p.g2)},
                     {"delta_a", p.delta_a}, {"delta_in", p.delta_in}, {"v_g", p.v_g}};
    doc["grid"] = {{"n_cells", c.grid.n_cells},
                   {"x_resonator", c.grid.x_resonator},
                   {"dx", c.grid.dx},
                   {"boundary", c.grid.boundary == Boundary::open ? "open" : "sponge"}};
    doc["pulse"] = {{"center", c.pulse.center}, {"tau", c.pulse.tau}, {"k_offset", c.pulse.k_offset}};
    json segs = json::array();
    for (const auto& s : c.schedule.segments())
        segs.push_back({{"t_start", s.t_start}, {"t_end", s.t_end}, {"level", s.level}});
    doc["schedule"] = {{"ramp_time", c.schedule.ramp_time()}, {"segments", segs}};
    auto scale = [](bool rel) { return rel ? "kappa1_prime" : "kappa1"; };
    doc["spectrum"] = {{"scale", scale(c.spectrum.relative_to_kappa1_prime)},
                       {"h_e", c.spectrum.h_e},
                       {"detuning_min", c.spectrum.detuning_min},
                       {"detuning_max", c.spectrum.detuning_max},
                       {"points", c.spectrum.points}};
    doc["delay_curve"] = {{"scale", scale(c.delay_curve.relative_to_kappa1_prime)},
                          {"h_min", c.delay_curve.h_min},
                          {"h_max", c.delay_curve.h_max},
                          {"points", c.delay_curve.points},
                          {"detuning", c.delay_curve.detuning}};
    doc["slow"] = {{"geometry", c.slow.geometry == Geometry::side ? "side" : "end"},
                   {"h_e", c.slow.h_e},
                   {"snapshot_times", c.slow.snapshot_times},
                   {"settle_threshold", c.slow.settle_threshold}};
    doc["store"] = {{"phase_phi", c.store.phase_phi},
                    {"switch_sharpness", c.store.switch_sharpness},
                    {"snapshot_times", c.store.snapshot_times},
                    {"settle_threshold", c.store.settle_threshold}};
    doc["oracle"] = {{"g", c.oracle.g},
                     {"ratios", c.oracle.ratios},
                     {"comparison_ratio", c.oracle.comparison_ratio},
                     {"comparison_samples", c.oracle.comparison_samples}};
    doc["outputs"] = {{"prefix", c.outputs.prefix}, {"svg", c.outputs.svg}};
    return doc.dump(2) + "\n";
}

} // namespace eitsim

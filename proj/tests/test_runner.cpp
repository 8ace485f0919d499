#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eitsim/config.hpp"
#include "eitsim/csv.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/scenarios.hpp"
#include "eitsim/svg.hpp"

using namespace eitsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count(const std::string& s, const std::string& what)
{
    std::size_t n = 0;
    for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1))
        ++n;
    return n;
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("eitsim_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("csv number format round-trips")
{
    for (double v : {0.0, 1.0, -2.5e-300, 0.1, 1.0 / 3.0, 6.02214076e23})
        CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.25) == "2.5e-01");
}

TEST_CASE("svg emitter")
{
    const PlotAxes axes{"x", "y", "t"};
    const std::string one = emit_svg({{{0.0, 1.0}, {0.0, 1.0}, "a"}}, axes);
    CHECK(count(one, "<polyline") == 1);
    CHECK(one == emit_svg({{{0.0, 1.0}, {0.0, 1.0}, "a"}}, axes));

    const std::string three =
        emit_svg({{{0.0, 1.0}, {0.0, 1.0}, "a"}, {{0.0, 1.0}, {1.0, 0.0}, "b"}, {{0.0, 2.0}, {0.5, 0.5}, "c<d"}}, axes);
    CHECK(count(three, "<polyline") == 3);
    CHECK(count(three, "stroke-width=\"2\"") == 3); // legend swatches
    CHECK(three.find("c&lt;d") != std::string::npos);

    CHECK_THROWS_AS(emit_svg({}, axes), ContractError);
    CHECK_THROWS_AS(emit_svg({{{}, {}, "e"}}, axes), ContractError);
    CHECK_THROWS_AS(emit_svg({{{0.0}, {0.0, 1.0}, "e"}}, axes), ContractError);
}

TEST_CASE("parallel map keeps input order")
{
    std::atomic<int> calls{0};
    const auto out = parallel_map<int>(
        50, [&](std::size_t i) { ++calls; return static_cast<int>(i * i); }, 4);
    CHECK(calls == 50);
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(out[i] == static_cast<int>(i * i));

    try {
        parallel_map<int>(
            10,
            [](std::size_t i) -> int {
                if (i == 3 || i == 7)
                    throw std::runtime_error("bad " + std::to_string(i));
                return 0;
            },
            3);
        FAIL("expected exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "bad 3");
    }
}

TEST_CASE("sample configs round-trip")
{
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(EITSIM_CONFIG_DIR)) {
        if (entry.path().extension() != ".json")
            continue;
        CAPTURE(entry.path().string());
        const auto c = load_config(entry.path().string());
        const auto text = serialize_config(c);
        const auto back = parse_config(text);
        CHECK(back == c);
        CHECK(serialize_config(back) == text);
        ++n;
    }
    CHECK(n >= 10);
}

TEST_CASE("config defaults and errors")
{
    const auto c = parse_config(R"({"scenario": "spectrum", "params": {"kappa2": 0.01},
                                    "spectrum": {"detuning_min": -1, "detuning_max": 1}})");
    CHECK(c.spectrum.points == 801);
    CHECK(c.params.kappa_ex == 1.0);
    CHECK(c.output_prefix() == "spectrum");

    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "spectrum", "params": {"kappa_ex": -1}})"),
                         doctest::Contains("kappa_ex"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "spectrum", "bogus": 1, "params": {"kapa1": 1}})"),
                         doctest::Contains("bogus params.kapa1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "store"})"), doctest::Contains("no hold phase"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "warp"})"), doctest::Contains("scenario"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "spectrum", "spectrum": {"points": 1}})"),
                         doctest::Contains("spectrum.points"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenario": "slow", "pulse": {"center": 100}})"),
                         doctest::Contains("pulse not localized"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/eitsim.json"), IoError);
}

TEST_CASE("SI and normalized documents agree")
{
    const auto a = load_config(std::string(EITSIM_CONFIG_DIR) + "/store.json");
    const auto b = load_config(std::string(EITSIM_CONFIG_DIR) + "/store_si.json");
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(x)); };
    CHECK(close(a.params.kappa1, b.params.kappa1));
    CHECK(close(a.params.kappa_ex, b.params.kappa_ex));
    CHECK(close(a.params.v_g, b.params.v_g));
    CHECK(close(a.schedule.ramp_time(), b.schedule.ramp_time()));
    REQUIRE(a.schedule.segments().size() == b.schedule.segments().size());
    for (std::size_t k = 0; k < a.schedule.segments().size(); ++k) {
        CHECK(close(a.schedule.segments()[k].t_start, b.schedule.segments()[k].t_start));
        CHECK(close(a.schedule.segments()[k].t_end, b.schedule.segments()[k].t_end));
        CHECK(close(a.schedule.segments()[k].level, b.schedule.segments()[k].level));
    }

    const auto sa = scratch("si_a"), sb = scratch("si_b");
    auto ca = load_config(std::string(EITSIM_CONFIG_DIR) + "/spectrum_fig3.json");
    auto cb = load_config(std::string(EITSIM_CONFIG_DIR) + "/spectrum_si.json");
    cb.outputs.prefix = ca.outputs.prefix;
    run_scenario(ca, sa.string(), false);
    run_scenario(cb, sb.string(), false);
    for (const auto& e : fs::directory_iterator(sa))
        CHECK(slurp(e.path()) == slurp(sb / e.path().filename()));
    fs::remove_all(sa);
    fs::remove_all(sb);
}

TEST_CASE("scenario output is deterministic")
{
    for (const char* name : {"spectrum_fig3.json", "delay_curve.json", "oracle.json"}) {
        CAPTURE(name);
        const auto c = load_config(std::string(EITSIM_CONFIG_DIR) + "/" + name);
        const auto d1 = scratch("det1"), d2 = scratch("det2");
        const auto r1 = run_scenario(c, d1.string(), true);
        const auto r2 = run_scenario(c, d2.string(), true);
        REQUIRE(r1.files.size() == r2.files.size());
        REQUIRE(!r1.files.empty());
        for (const auto& e : fs::directory_iterator(d1))
            CHECK(slurp(e.path()) == slurp(d2 / e.path().filename()));
        fs::remove_all(d1);
        fs::remove_all(d2);
    }
}

TEST_CASE("spectrum csv schema")
{
    const auto c = load_config(std::string(EITSIM_CONFIG_DIR) + "/spectrum_fig3.json");
    const auto d = scratch("schema");
    run_scenario(c, d.string(), false);
    std::ifstream in(d / "fig3_h0.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "detuning,power_T,phase,tau_g");
    fs::remove_all(d);
}

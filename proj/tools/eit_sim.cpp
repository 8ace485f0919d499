// eit-sim: run one named scenario from a JSON configuration.
#include <CLI11.hpp>
#include <iostream>

#include "eitsim/config.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/scenarios.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, numeric_error = 2, io_error = 3 };

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled-resonator EIT simulator"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir = ".";
    bool svg = false;
    bool validate_only = false;
    for (const char* name : {"spectrum", "delay-curve", "slow", "store", "oracle"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out-dir", out_dir, "directory for CSV/SVG output");
        sub->add_flag("--svg", svg, "also write an SVG plot");
        sub->add_flag("--validate-only", validate_only, "parse and validate, then exit");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    eitsim::ExperimentConfig cfg;
    try {
        cfg = eitsim::load_config(config_path);
        if (eitsim::scenario_name(cfg.scenario) != command)
            throw eitsim::ConfigError("scenario: config is for '" + eitsim::scenario_name(cfg.scenario)
                                      + "', subcommand is '" + command + "'");
    } catch (const eitsim::IoError& e) {
        std::cerr << "eit-sim: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "eit-sim: config error: " << e.what() << '\n';
        return config_error;
    }
    if (validate_only) {
        std::cout << "config ok: " << config_path << '\n';
        return ok;
    }

    try {
        const auto res = eitsim::run_scenario(cfg, out_dir, svg);
        for (const auto& line : res.summary)
            std::cout << line << '\n';
        for (const auto& f : res.files)
            std::cout << "wrote " << f << '\n';
    } catch (const eitsim::IoError& e) {
        std::cerr << "eit-sim: I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const eitsim::ContractError& e) {
        std::cerr << "eit-sim: config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "eit-sim: numeric error: " << e.what() << '\n';
        return numeric_error;
    }
    return ok;
}

// cavitycat: run, compare and sweep cat-state decoherence scenarios.

#include "CLI11.hpp"

#include <iostream>
#include <string>

#include "cavitycat/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two-atom correlation signal of decohering cavity cat states"};
    app.require_subcommand(1);

    std::string config;
    std::string param;
    std::string values;

    auto* run = app.add_subcommand("run", "Time series for one scenario");
    run->add_option("--config", config, "Scenario config (JSON)")->required();

    auto* compare = app.add_subcommand("compare", "Microscopic vs master-equation time series plus summary");
    compare->add_option("--config", config, "Scenario config (JSON) with bath and master sections")->required();

    auto* sweep = app.add_subcommand("sweep", "One run per parameter value");
    sweep->add_option("--config", config, "Scenario config (JSON)")->required();
    sweep->add_option("--param", param, "phi | alpha0_re | gamma")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cavitycat::cli::ConfigInvalid;
    }

    if (*run) return cavitycat::cli::run_command(config);
    if (*compare) return cavitycat::cli::compare_command(config);
    return cavitycat::cli::sweep_command(config, param, values);
}

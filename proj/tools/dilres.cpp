#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dilres/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dilres: spectra of complex-dilated atom-field Hamiltonians"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    for (const char* name : {"spectrum", "scan", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "TOML configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        sub->add_option("--seed", seed, "seed for randomized audits (overrides the config seed)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dilres::kExitConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    dilres::RunConfig config;
    try {
        config = dilres::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dilres::kExitConfigError;
    }
    const CLI::App* sub = app.get_subcommand(command);
    if (sub->count("--out")) config.out_dir = out_dir;
    if (sub->count("--seed")) config.seed = seed;
    return dilres::run_command(command, config);
}

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sumlab/cli.hpp"
#include "sumlab/error.hpp"

int main(int argc, char** argv) {
    using sumlab::cli::apply_setting;

    CLI::App app{"sumlab: weighted summatory functions of self-dual L-functions"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_file;
    std::vector<std::string> tol_overrides;
    // Each option keeps its raw text so the config file can be applied first and flags layered on top.
    const std::vector<std::string> keys = {
        "lfunction", "omega", "k",    "x-lo",     "x-hi",     "points",       "spacing", "out", "threads",
        "backend",   "s",     "c",    "T",        "seed",     "sigma-lo",     "sigma-hi", "sigma-points",
        "t-lo",      "t-hi",
    };
    std::map<std::string, std::string> raw;
    app.add_option("--config", config_file, "key=value file; flags override its entries");
    app.add_option("--tol-override", tol_overrides, "tolerance override KEY=VAL (repeatable)");
    for (const auto& key : keys) app.add_option("--" + key, raw[key]);

    for (const auto& cmd : sumlab::cli::commands) app.add_subcommand(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        sumlab::cli::RunConfig cfg;
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw sumlab::Error(sumlab::Errc::config_parse_error, "cannot open config file " + config_file);
            sumlab::cli::apply_config_file(cfg, in, config_file);
        }
        cfg.command = app.get_subcommands().front()->get_name();
        for (const auto& key : keys)
            if (app.count("--" + key) > 0) apply_setting(cfg, key, raw[key]);
        for (const auto& t : tol_overrides) apply_setting(cfg, "tol-override", t);
        return sumlab::cli::run(cfg, std::cout);
    } catch (const sumlab::Error& e) {
        std::cerr << "sumlab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sumlab: " << e.what() << '\n';
        return 3;
    }
}

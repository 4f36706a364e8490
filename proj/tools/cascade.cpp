// cascade: spectral controllability experiments for wave-heat and heat-wave cascades.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "cascade/cli/commands.hpp"
#include "cascade/cli/config.hpp"
#include "cascade/errors.hpp"

int main(int argc, char** argv) {
    using namespace cascade::cli;
    CLI::App app{"Spectral controllability toolkit for 1-D wave-heat and heat-wave cascades"};
    std::string command;
    std::string config_path;
    std::string output_dir;
    bool print_defaults = false;
    RunOptions opt;
    app.add_flag("--print-defaults", print_defaults, "Print the default configuration as JSON and exit");
    app.add_flag("--gnuplot-stub", opt.gnuplot_stub, "Also write a gnuplot template next to the CSV output");
    app.add_option("-o,--output-dir", output_dir, "Override output_dir from the config");
    app.add_option("command", command, "spectrum | gamma-scan | hum | noninv | constants | hw")
        ->check(CLI::IsMember(command_names()));
    app.add_option("config", config_path, "JSON configuration file");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (print_defaults) {
        std::cout << default_config_json().dump(2) << '\n';
        return 0;
    }
    if (command.empty() || config_path.empty()) {
        std::cerr << app.help() << "error: a command and a config file are required\n";
        return 2;
    }
    try {
        auto cfg = load_config(config_path);
        if (const char* env = std::getenv("CASCADE_PRECISION")) cfg.precision = cascade::parse_precision(env);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        const auto report = run_command(command, cfg, opt);
        for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
        std::cout << report["results"].dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

#pragma once

#include <exception>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascade/cli/config.hpp"

namespace cascade::cli {

struct RunOptions {
    bool gnuplot_stub = false;
};

const std::vector<std::string>& command_names();

// Runs one command, writes its CSV files and <command>_report.json into the
// configured output directory, and returns the report.
nlohmann::json run_command(const std::string& name, const ExperimentConfig& cfg, const RunOptions& opt = {});

// 2 config error, 3 vanishing coupling, 4 ill-conditioned, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace cascade::cli

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dcqed/config.hpp"

namespace dcqed::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;  // file suffix; empty for the primary table
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
    std::vector<Table> tables;
    bool numerical_failure = false;
};

struct CommandArgs {
    std::string nu;
    std::string kappa;
    std::string freq_ghz;
    std::vector<double> probes_ghz;
    bool oracle = false;
    std::string model = "all";
};

CommandResult cmd_conductivity(const RunConfig& config, const CommandArgs& args);
CommandResult cmd_impedance(const RunConfig& config, const CommandArgs& args);
CommandResult cmd_modes(const RunConfig& config, const CommandArgs& args);
CommandResult cmd_spectral_density(const RunConfig& config, const CommandArgs& args);
CommandResult cmd_lamb_shift(const RunConfig& config, const CommandArgs& args);
CommandResult cmd_kk_check(const RunConfig& config, const CommandArgs& args);

// Dispatches by subcommand name; throws ConfigError for an unknown name.
CommandResult run_command(const std::string& name, const RunConfig& config, const CommandArgs& args);

std::string format_csv(const Table& table, int precision, const std::vector<std::string>& notes);
nlohmann::json format_json(const std::string& command, const RunConfig& config,
                           const CommandResult& result);

// Writes every table; CSV tables after the first go to <stem>_<name>.csv next to path.
// An empty path writes to stdout.
void write_outputs(const std::string& command, const RunConfig& config, const CommandResult& result,
                   const std::string& path);

}  // namespace dcqed::cli

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "app/config.hpp"

namespace ifszeta::app {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_budget = 3, exit_numeric = 4 };

const std::vector<std::string>& command_names();

// Files produced by a command, keyed by file name, plus run metadata.
struct CommandOutput {
  std::map<std::string, std::string> files;
  nlohmann::json results = nlohmann::json::object();
  // Nonzero when the command ran but its checks failed.
  int status = 0;
};

// Runs one command without touching the file system. Throws ConfigError or
// ifszeta::Error on failure.
CommandOutput execute(const std::string& command, const RunConfig& cfg, std::ostream& log,
                      const std::filesystem::path& preset_dir = default_preset_dir());

// Runs a command, writes its files and run.json into cfg.out, and maps
// failures to exit codes with a message on err.
int run(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err,
        const std::filesystem::path& preset_dir = default_preset_dir());

int exit_code_for(Errc code);

}  // namespace ifszeta::app

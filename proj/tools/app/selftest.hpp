#pragma once

#include <filesystem>
#include <iosfwd>

#include "app/commands.hpp"

namespace ifszeta::app {

// A fast subset of the acceptance checks on the shipped presets. CSV
// contents depend only on the presets, never on cfg.threads.
CommandOutput selftest(const RunConfig& cfg, std::ostream& log, const std::filesystem::path& preset_dir);

}  // namespace ifszeta::app

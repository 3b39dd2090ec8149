#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace nls::cli {

// Exit codes of `nls <experiment>`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

const std::vector<std::string>& experiment_names();

// Runs one experiment; writes CSV files and verdict.json into out_dir.
// Diagnostics go to `err`, the one-line summary and wall time to `out`.
int run_experiment(const std::string& experiment, const std::string& config_path,
                   const std::string& out_dir, std::ostream& out, std::ostream& err);

// Same, with an already parsed config (used by tests).
int run_experiment_json(const std::string& experiment, const nlohmann::json& config,
                        const std::string& out_dir, std::ostream& out, std::ostream& err);

void list_presets(std::ostream& os);

// FNV-1a 64 of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_digest(const nlohmann::json& config);

}  // namespace nls::cli

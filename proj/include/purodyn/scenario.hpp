#pragma once

// Scenario runner: JSON config parsing and validation, the four model
// scenarios plus circuit compilation, dataset emission, and reproducibility
// metadata.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "purodyn/errors.hpp"
#include "purodyn/types.hpp"

namespace purodyn {

using Json = nlohmann::json;

/// Built-in scenario identifiers.
std::vector<std::string> scenario_names();

/// Default config for one scenario (schema_version 1).
Json default_config(const std::string& scenario);

/// All violations found in the config, one human-readable line each with
/// the offending field path. Empty means runnable.
std::vector<std::string> validate_config(const Json& config);

struct RunSummary {
  std::string scenario;
  int exit_code = 0;  // 0 ok, 2 invariant violation, 3 optimizer non-convergence
  Json document;      // full summary (also written to run_summary.json)
};

/// Executes a scenario end to end, writing its artifacts into out_dir.
/// Partial outputs and the summary are still written on failure.
RunSummary run_scenario(const Json& config, const std::filesystem::path& out_dir);

// JSON codecs shared with the CLI and tests.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

}  // namespace purodyn

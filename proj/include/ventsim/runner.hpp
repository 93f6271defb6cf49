#pragma once

/**
 * @file runner.hpp
 * @brief Runs a parsed scenario file according to its study kind and writes
 * the standard output files.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "ventsim/checks.hpp"
#include "ventsim/scenario_io.hpp"

namespace ventsim {

struct RunOutputs {
  std::vector<SimulationTrace> runs;
  std::string summary_csv;
  std::string table;  // for standard output
  std::vector<CheckResult> checks;
};

/// Executes the study selected in `file`. With `evaluate_checks`, also runs
/// the expectations named by file.check (or the study's own criterion);
/// throws ConfigError when none applies.
RunOutputs execute(const ScenarioFile& file, bool evaluate_checks);

/// trace.csv, breaths.csv, summary.csv, events.log and scenario.resolved.
/// Returns the written paths in that order.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir,
                                                 const ScenarioFile& file,
                                                 const RunOutputs& outputs);

}  // namespace ventsim

#pragma once

/**
 * @file output.hpp
 * @brief CSV and log writers. Column names carry units; numbers use fixed
 * precision so identical runs give byte-identical files.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "ventsim/sim_engine.hpp"
#include "ventsim/studies.hpp"

namespace ventsim {

std::string trace_csv(const std::vector<SimulationTrace>& runs);
std::string breaths_csv(const std::vector<SimulationTrace>& runs);
std::string events_log(const std::vector<SimulationTrace>& runs);

/// One row per run: breath statistics and alarm counts.
std::string run_summary_csv(const std::vector<SimulationTrace>& runs, long warmup_breaths);
/// One row per set-point, one column per case.
std::string parameter_study_csv(const ParameterStudyResult& result);
/// One row per (v_ref, bpm) cell.
std::string tracking_study_csv(const TrackingStudyResult& result);
/// One row per breath around the PEEP event, both variants side by side.
std::string transient_study_csv(const TransientStudyResult& result);

/// Human-readable tables for standard output.
std::string parameter_study_table(const ParameterStudyResult& result);
std::string tracking_study_table(const TrackingStudyResult& result);
std::string transient_study_table(const TransientStudyResult& result);
std::string run_summary_table(const std::vector<SimulationTrace>& runs, long warmup_breaths);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ventsim

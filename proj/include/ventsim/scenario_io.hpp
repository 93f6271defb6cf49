#pragma once

/**
 * @file scenario_io.hpp
 * @brief Scenario files: a flat `key = value` text format grouped in
 * `[sections]`, units spelled out in key names, `#` comments.
 *
 * The format is documented in docs/file_formats.md.
 */

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ventsim/sim_engine.hpp"
#include "ventsim/studies.hpp"

namespace ventsim {

inline constexpr std::string_view kScenarioSchema = "ventsim-scenario/1";

enum class StudyKind { kSingle, kParameterStudy, kTrackingStudy, kTransientStudy };

std::string to_string(StudyKind kind);
/// Throws ConfigError for unknown names.
StudyKind parse_study_kind(std::string_view name);

/// Scenario-specific expectation evaluated by `ventsim --check`.
enum class CheckKind {
  kNone,
  kLossless,       // measured = geometric tidal volume
  kRepeatability,  // fixed set-point spread
  kDisconnection,  // alarm (d) every breath
  kOverdrive,      // alarm (c) with truncation
  kNominal,        // no alarms
  kMinuteVolume,   // alarm (b) after a v_ref step down, cleared after restore
  kStudy,          // the study's own criterion
};

std::string to_string(CheckKind kind);
CheckKind parse_check_kind(std::string_view name);

struct StudySpec {
  StudyKind kind = StudyKind::kSingle;
  std::vector<double> phi_grid = default_phi_grid();
  std::vector<ParameterCase> cases = default_parameter_cases();
  long averaged_breaths = 10;
  std::vector<double> v_refs = {350.0, 400.0, 450.0};
  std::vector<int> bpms = {10, 20, 30};
  long measured_breaths = 100;
  long breaths_before = 3;
  long breaths_after = 15;
};

struct ScenarioFile {
  Scenario scenario;
  StudySpec study;
  CheckKind check = CheckKind::kNone;
};

/// Parses scenario text. Errors are ConfigError with "source:line: message".
ScenarioFile parse_scenario(std::string_view text, const std::string& source = "<text>");

/// Reads and parses a file; unreadable files are ConfigError too.
ScenarioFile load_scenario_file(const std::filesystem::path& path);

/// Canonical text of a scenario (every field, fixed order). Parsing the
/// result gives back the same scenario.
std::string format_scenario(const ScenarioFile& file);

/// Operator-setting requirements: PEEP in {5, 10, 15, 20} mBar, BPM in
/// {10, 12, ..., 30}, 1 <= E/I <= 3, v_ref in [350, 450] mL. Returns every
/// violation; empty means the settings are admissible.
std::vector<std::string> validate_settings(const VentSettings& settings);

}  // namespace ventsim

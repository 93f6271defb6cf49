#pragma once

/**
 * @file studies.hpp
 * @brief Batch experiments: set-point sweep per patient case, tracking
 * statistics over a (v_ref, bpm) grid, and the PEEP-step transient.
 *
 * Independent scenarios run on worker threads; results always come back in
 * input order.
 */

#include <string>
#include <vector>

#include "ventsim/sim_engine.hpp"

namespace ventsim {

/// Runs scenarios concurrently (threads = 0 uses the hardware count).
/// Result i belongs to scenario i.
std::vector<SimulationTrace> run_batch(const std::vector<Scenario>& scenarios, unsigned threads = 0);

struct ParameterCase {
  std::string label;
  Patient patient;
  double peep = 5.0;
};

/// disconnected (PEEP 5), healthy (5), ARDS (5), ARDS (10).
std::vector<ParameterCase> default_parameter_cases();
/// 0.20 to 0.50 rad in 0.05 steps.
std::vector<double> default_phi_grid();

struct ParameterStudyResult {
  std::vector<double> phi;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> mean_volume;  // [phi][case], mL
  long averaged_breaths = 0;
  std::vector<SimulationTrace> runs;  // phi-major, case-minor
};

/// Fixed set-point runs; each cell is the mean measured tidal volume over
/// `averaged_breaths` breaths following base.warmup_breaths.
ParameterStudyResult run_parameter_study(const Scenario& base, const std::vector<double>& phi_grid,
                                         const std::vector<ParameterCase>& cases,
                                         long averaged_breaths = 10, unsigned threads = 0);

struct TrackingCell {
  double v_ref = 0.0;
  int bpm = 0;
  double mean_error = 0.0;  // mL, measured - reference
  double rms_error = 0.0;
  double max_abs_error = 0.0;
  long breaths = 0;
  long alarms = 0;
};

struct TrackingStudyResult {
  std::vector<TrackingCell> cells;
  std::vector<SimulationTrace> runs;  // same order as cells
};

/// Adaptive runs; statistics over `measured_breaths` after base.warmup_breaths.
TrackingStudyResult run_tracking_study(const Scenario& base, const std::vector<double>& v_refs,
                                             const std::vector<int>& bpms,
                                             long measured_breaths = 100, unsigned threads = 0);

struct TransientRow {
  long relative_breath = 0;
  long breath = 0;
  double v_adaptive = 0.0;
  double v_fixed = 0.0;
  double phi_adaptive = 0.0;
  double phi_fixed = 0.0;
  double p_end_exp_adaptive = 0.0;
  double p_end_exp_fixed = 0.0;
  double peep_setting = 0.0;  // during that breath's exhalation
};

struct TransientStudyResult {
  long event_breath = 0;
  std::vector<TransientRow> rows;
  SimulationTrace adaptive;
  SimulationTrace fixed;
};

/// Runs `base` with adaptation, then again with adaptation off and the
/// set-point frozen at the adaptive run's value just before the first PEEP
/// event. Rows cover [event - before, event + after].
TransientStudyResult run_transient_study(const Scenario& base, long before = 3, long after = 15);

}  // namespace ventsim

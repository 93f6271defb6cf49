#pragma once

/**
 * @file checks.hpp
 * @brief Pass/fail evaluation of simulation results against the expected
 * behaviour of each bundled experiment. Shared by `ventsim --check` and the
 * acceptance test binary.
 */

#include <string>
#include <vector>

#include "ventsim/sim_engine.hpp"
#include "ventsim/studies.hpp"

namespace ventsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every breath of every run within `tolerance` mL of the geometric volume.
CheckResult check_lossless(const ParameterStudyResult& result, const BagGeometry& geometry,
                           double tolerance = 0.5);

/// Monotone columns, case ordering, separation and the disconnected column
/// within +-15 % of the reference measurement. Cases must be in the order
/// disconnected, healthy(5), ARDS(5), ARDS(10).
std::vector<CheckResult> check_parameter_study(const ParameterStudyResult& result,
                                               double min_separation = 15.0,
                                               double disconnected_rel_tol = 0.15);

/// |mean| <= 0.5, RMS <= 1.5, max <= 4 mL in every cell.
CheckResult check_tracking_study(const TrackingStudyResult& result);

/// Adaptive within 400 +- 10 mL from three breaths after the step, fixed
/// below 395 mL for every breath after it, end-expiratory shift 5 +- 1 mBar.
std::vector<CheckResult> check_transient_study(const TransientStudyResult& result,
                                               double v_ref = 400.0);

/// Spread of tidal volumes after warm-up: RMS <= 0.2 % of mean, max
/// deviation <= 2.5 mL.
CheckResult check_repeatability(const SimulationTrace& run, long warmup_breaths);

CheckResult check_disconnection_alarm(const SimulationTrace& run);

/// Alarm (c) fires, every breath that raised it was truncated, and no
/// measured sample exceeds p_insp_max plus the largest one-step pressure rise
/// seen below the threshold.
CheckResult check_overdrive(const SimulationTrace& run, const AlarmThresholds& thresholds);

CheckResult check_no_alarms(const SimulationTrace& run);

/// Alarm (b) absent before the v_ref step down, present after it, and absent
/// again over the final `clear_breaths` breaths after v_ref is restored.
CheckResult check_minute_volume_alarm(const Scenario& scenario, const SimulationTrace& run,
                                      long clear_breaths = 10);

}  // namespace ventsim

#pragma once

/**
 * @file sensing_alarms.hpp
 * @brief Flow meter and pressure sensor models, per-breath statistics, alarms.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ventsim/rng.hpp"

namespace ventsim {

struct VentSettings;

struct FlowSensorModel {
  double range_low = -10.0;   // L/min
  double range_high = 240.0;  // L/min
  int resolution_bits = 16;
  double accuracy_pct = 2.0;       // bound on the fixed multiplicative bias
  double repeatability_pct = 1.0;  // bound on the per-sample uniform noise
  double bias_pct = 0.0;           // bias applied in this scenario, |bias| <= accuracy
  double sample_period = 1.0e-3;   // s

  void validate() const;
  double lsb() const;  // L/min per count
};

struct PressureSensorModel {
  double range_low = 0.0;     // mBar
  double range_high = 100.0;  // mBar
  double noise_sd = 0.05;     // mBar
  double sample_period = 1.0e-3;

  void validate() const;
};

/// Draws a fixed bias uniformly within +-accuracy_pct.
double draw_flow_bias_pct(const FlowSensorModel& model, Rng& rng);

struct FlowSample {
  double measured = 0.0;  // mL/s
  bool clipped = false;
};

/// True flow [mL/s] -> L/min, clip to range, bias, repeatability noise,
/// zero-aligned quantization at the 16-bit span resolution, back to mL/s.
FlowSample sample_flow(const FlowSensorModel& model, double true_flow, Rng& rng);

/// Additive Gaussian noise, clipped to the sensor range.
double sample_pressure(const PressureSensorModel& model, double true_pressure, Rng& rng);

/// Rectangular integral of the positive part of a flow trace [mL].
double integrate_tidal_volume(std::span<const double> flow, double dt);

enum class AlarmCode : char {
  kTidalVolumeLow = 'a',
  kMinuteVolumeLow = 'b',
  kInspiratoryPressureHigh = 'c',
  kInspiratoryPressureLow = 'd',
};

struct AlarmEvent {
  long breath = 0;
  double time = 0.0;
  AlarmCode code = AlarmCode::kTidalVolumeLow;
  double value = 0.0;
  double threshold = 0.0;
};

std::string alarm_name(AlarmCode code);

struct AlarmThresholds {
  double v_tidal_min = 360.0;          // mL
  double minute_volume_min = 7200.0;   // mL/min
  double p_insp_max = 35.0;            // mBar
  double p_insp_min = 5.0;             // mBar

  void validate() const;
};

/// 0.9 v_ref, 0.9 v_ref bpm, 35 mBar, 5 mBar.
AlarmThresholds default_thresholds(const VentSettings& settings);

struct BreathRecord {
  long k = 0;
  double t_start = 0.0;  // s
  double t_end = 0.0;    // s, start of the next breath
  double phi_tgt_used = 0.0;
  double v_ref = 0.0;
  double v_tidal = 0.0;          // measured, mL
  double v_delivered = 0.0;      // true volume into the lung, mL
  double v_bag_expelled = 0.0;   // during the inhale window, mL
  double v_leak = 0.0;
  double v_compression = 0.0;
  double p_peak = 0.0;     // measured peak inspiratory pressure
  double p_end_exp = 0.0;  // measured at the last sample of the breath
  double peep_setting = 0.0;  // PEEP valve setting during this breath's exhale
  long inhale_samples = 0;
  long exhale_samples = 0;
  long clipped_samples = 0;
  bool truncated = false;
  bool adaptation_saturated = false;
  std::vector<AlarmEvent> alarms;
};

/// Sum of tidal volumes of breaths that ended in (now - 60 s, now].
double minute_volume(std::span<const BreathRecord> history, double now);

enum class AlarmStage {
  kLiveInhale,  // every inhale sample, uses live_pressure
  kInhaleEnd,   // once, uses record.p_peak
  kBreathEnd,   // once, uses record.v_tidal and minute_volume
};

struct AlarmDecision {
  std::vector<AlarmEvent> events;
  bool end_inhale_now = false;  // alarm (c): switch to exhale immediately
};

/// Evaluates the alarms that belong to `stage`. Alarm (b) is skipped until a
/// full minute of history exists (`minute_window_full`).
AlarmDecision check_alarms(const AlarmThresholds& thresholds, const BreathRecord& record,
                           double minute_vol, double live_pressure, AlarmStage stage, double now,
                           bool minute_window_full = true);

}  // namespace ventsim

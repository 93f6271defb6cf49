#include "ventsim/sensing_alarms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ventsim/errors.hpp"
#include "ventsim/motor_control.hpp"
#include "ventsim/units.hpp"

namespace ventsim {

void FlowSensorModel::validate() const {
  if (!(range_high > range_low)) throw ConfigError("flow sensor: range_high must exceed range_low");
  if (resolution_bits < 2 || resolution_bits > 32)
    throw ConfigError("flow sensor: resolution_bits must be in [2, 32]");
  if (accuracy_pct < 0.0 || repeatability_pct < 0.0)
    throw ConfigError("flow sensor: accuracy and repeatability must be non-negative");
  if (std::abs(bias_pct) > accuracy_pct + 1e-12)
    throw ConfigError("flow sensor: |bias_pct| must not exceed accuracy_pct");
  if (!(sample_period > 0.0)) throw ConfigError("flow sensor: sample_period must be positive");
}

double FlowSensorModel::lsb() const {
  return (range_high - range_low) / (std::ldexp(1.0, resolution_bits) - 1.0);
}

void PressureSensorModel::validate() const {
  if (!(range_high > range_low))
    throw ConfigError("pressure sensor: range_high must exceed range_low");
  if (noise_sd < 0.0) throw ConfigError("pressure sensor: noise_sd must be non-negative");
  if (!(sample_period > 0.0)) throw ConfigError("pressure sensor: sample_period must be positive");
}

double draw_flow_bias_pct(const FlowSensorModel& model, Rng& rng) {
  return model.accuracy_pct * rng.symmetric();
}

FlowSample sample_flow(const FlowSensorModel& model, double true_flow, Rng& rng) {
  FlowSample out;
  double q = units::ml_per_s_to_l_per_min(true_flow);
  if (q < model.range_low || q > model.range_high) {
    out.clipped = true;
    q = std::clamp(q, model.range_low, model.range_high);
  }
  q *= 1.0 + model.bias_pct / 100.0;
  if (model.repeatability_pct > 0.0) q *= 1.0 + model.repeatability_pct / 100.0 * rng.symmetric();
  const double lsb = model.lsb();
  q = std::clamp(std::round(q / lsb) * lsb, model.range_low, model.range_high);
  out.measured = units::l_per_min_to_ml_per_s(q);
  return out;
}

double sample_pressure(const PressureSensorModel& model, double true_pressure, Rng& rng) {
  double p = true_pressure;
  if (model.noise_sd > 0.0) p += model.noise_sd * rng.normal();
  return std::clamp(p, model.range_low, model.range_high);
}

double integrate_tidal_volume(std::span<const double> flow, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_tidal_volume: dt must be positive");
  double sum = 0.0;
  for (double q : flow) sum += std::max(q, 0.0);
  return sum * dt;
}

std::string alarm_name(AlarmCode code) {
  switch (code) {
    case AlarmCode::kTidalVolumeLow: return "tidal_volume_low";
    case AlarmCode::kMinuteVolumeLow: return "minute_volume_low";
    case AlarmCode::kInspiratoryPressureHigh: return "inspiratory_pressure_high";
    case AlarmCode::kInspiratoryPressureLow: return "inspiratory_pressure_low";
  }
  return "unknown";
}

void AlarmThresholds::validate() const {
  if (v_tidal_min < 0.0 || minute_volume_min < 0.0)
    throw ConfigError("alarm thresholds: volume thresholds must be non-negative");
  if (!(p_insp_max > p_insp_min))
    throw ConfigError("alarm thresholds: p_insp_max must exceed p_insp_min");
}

AlarmThresholds default_thresholds(const VentSettings& settings) {
  AlarmThresholds t;
  t.v_tidal_min = 0.9 * settings.v_ref;
  t.minute_volume_min = 0.9 * settings.v_ref * settings.bpm;
  return t;
}

double minute_volume(std::span<const BreathRecord> history, double now) {
  double sum = 0.0;
  for (const auto& b : history) {
    if (b.t_end <= now + 1e-9 && b.t_end > now - 60.0 + 1e-9) sum += b.v_tidal;
  }
  return sum;
}

AlarmDecision check_alarms(const AlarmThresholds& thresholds, const BreathRecord& record,
                           double minute_vol, double live_pressure, AlarmStage stage, double now,
                           bool minute_window_full) {
  AlarmDecision d;
  auto raise = [&](AlarmCode code, double value, double threshold) {
    d.events.push_back(AlarmEvent{record.k, now, code, value, threshold});
  };
  switch (stage) {
    case AlarmStage::kLiveInhale:
      if (live_pressure > thresholds.p_insp_max) {
        raise(AlarmCode::kInspiratoryPressureHigh, live_pressure, thresholds.p_insp_max);
        d.end_inhale_now = true;
      }
      break;
    case AlarmStage::kInhaleEnd:
      if (record.p_peak < thresholds.p_insp_min)
        raise(AlarmCode::kInspiratoryPressureLow, record.p_peak, thresholds.p_insp_min);
      break;
    case AlarmStage::kBreathEnd:
      if (record.v_tidal < thresholds.v_tidal_min)
        raise(AlarmCode::kTidalVolumeLow, record.v_tidal, thresholds.v_tidal_min);
      if (minute_window_full && minute_vol < thresholds.minute_volume_min)
        raise(AlarmCode::kMinuteVolumeLow, minute_vol, thresholds.minute_volume_min);
      break;
  }
  return d;
}

}  // namespace ventsim

#pragma once

/**
 * @file sim_engine.hpp
 * @brief Fixed-step closed loop: trajectory, PI cascade, bag, circuit, lung,
 * sensors, alarms and breath-by-breath set-point adaptation.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ventsim/adaptation.hpp"
#include "ventsim/bag_model.hpp"
#include "ventsim/breathing_circuit.hpp"
#include "ventsim/lung_model.hpp"
#include "ventsim/motor_control.hpp"
#include "ventsim/sensing_alarms.hpp"

namespace ventsim {

/// A lung, or the circuit open to ambient through an orifice.
struct Patient {
  std::string label = "healthy";
  bool disconnected = false;
  LungParameters lung;
  double orifice_resistance = 0.5;  // mBar/(L/s), used when disconnected

  void validate() const;
};

/// "healthy", "ards" or "disconnected".
Patient patient_preset(const std::string& name);

struct PeepChange { double peep = 5.0; };
struct PatientChange { Patient patient; };
struct VRefChange { double v_ref = 400.0; };
struct BpmChange { int bpm = 20; };
struct IeChange { int inspiratory = 1; int expiratory = 2; };
struct AdaptationToggle { bool enabled = true; };

using EventChange =
    std::variant<PeepChange, PatientChange, VRefChange, BpmChange, IeChange, AdaptationToggle>;

/// A change applied at the start of `breath`. PEEP changes are dialled in at
/// the start of the previous breath's exhalation so that `breath` is the
/// first breath inflated from the new end-expiratory pressure.
struct ScenarioEvent {
  long breath = 0;
  EventChange change;
};

std::string describe(const EventChange& change);

struct Scenario {
  std::string name = "scenario";
  VentSettings settings;
  Patient patient;
  CircuitParameters circuit;  // peep_setting is taken from settings.peep
  BagGeometry geometry;
  MotorParameters motor;
  PiGains gains;
  AdaptationState adaptation;  // initial phi_tgt, gain, enabled
  SetpointLimits limits;
  FlowSensorModel flow_sensor;
  bool random_flow_bias = false;  // draw bias_pct from the seed instead
  PressureSensorModel pressure_sensor;
  std::optional<AlarmThresholds> thresholds;  // defaults from initial settings
  long n_breaths = 30;
  long warmup_breaths = 5;
  std::vector<ScenarioEvent> events;
  std::uint64_t seed = 1;
  double max_step = 1.0e-3;  // s
  bool record_trace = true;

  /// Throws ConfigError on the first problem found.
  void validate() const;
  AlarmThresholds resolved_thresholds() const;
};

/// Step count per breath: the smallest multiple of (I+E) with
/// T_b / N <= max_step, so phase boundaries fall on steps.
long samples_per_breath(const VentSettings& settings, double max_step);

struct TraceSample {
  double t = 0.0;          // s
  long breath = 0;
  bool inhale = true;
  double phi = 0.0;        // rad
  double phi_ref = 0.0;    // rad
  double voltage = 0.0;    // V
  double current = 0.0;    // A
  double flow_true = 0.0;      // mL/s into the lung
  double flow_measured = 0.0;  // mL/s
  double p_aw = 0.0;           // mBar
  double p_measured = 0.0;     // mBar
  double v_lung = 0.0;         // mL
  double v_bag = 0.0;          // mL
};

struct SimulationTrace {
  std::string scenario_name;
  double flow_bias_pct = 0.0;
  std::vector<TraceSample> samples;
  std::vector<BreathRecord> breaths;
  std::vector<AlarmEvent> alarms;  // all breaths, in time order
  std::vector<std::string> event_log;  // applied scenario events
};

/// Runs the scenario. Throws ConfigError before stepping and
/// InvariantViolation on a failed runtime check.
SimulationTrace run_scenario(const Scenario& scenario);

}  // namespace ventsim

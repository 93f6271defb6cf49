#pragma once

/**
 * @file breathing_circuit.hpp
 * @brief Airway between bag and patient: patient valve, PEEP valve and losses.
 *
 * During inhalation the bag pushes gas through the inhale limb. Part of it
 * leaks (proportional to circuit pressure), part of it compresses the tubing
 * and bag wall, and before the patient valve seats against the expiratory
 * port an extra seating compliance is charged up to the opening pressure.
 * Whatever is left reaches the lung. During exhalation the lung empties
 * through the PEEP relief valve and the bag path is closed.
 */

namespace ventsim {

enum class BreathPhase { kInhale, kExhale };

struct CircuitParameters {
  double inhale_dead_volume = 195.0;   // mL
  double exhale_dead_volume = 120.0;   // mL
  double leak_coefficient = 0.5;       // mL/s per mBar
  double compression_compliance = 2.5; // mL/mBar
  double valve_seat_compliance = 3.5;  // mL/mBar, charged until the patient valve opens
  double peep_setting = 5.0;           // mBar
  double valve_crack_margin = 0.5;     // mBar
  double peep_valve_resistance = 2.0;  // mBar/(L/s)

  void validate() const;
};

/// Lossless circuit for conservation checks.
CircuitParameters lossless_circuit();

struct InhaleFlows {
  double lung = 0.0;
  double leak = 0.0;
  double compression = 0.0;
};

/// Splits the bag flow for a known circuit pressure and its rate of change.
/// `seat_flow` is the part charging the patient-valve seat and is booked as
/// compression.
InhaleFlows route_inhale(const CircuitParameters& circuit, double bag_flow, double p_aw,
                         double dp_aw_dt, double seat_flow = 0.0);

/// Inhale-limb state carried between steps of one inhalation.
struct InhaleLimbState {
  double pressure = 0.0;    // mBar gauge, starts at ambient
  bool valve_open = false;  // patient valve seated against the expiratory port
};

struct InhaleStep {
  InhaleFlows flows;
  double p_aw = 0.0;
  InhaleLimbState limb;
};

/// Implicit solve of one inhale step: circuit pressure, leak, compression and
/// lung flow consistent with p_aw = p_alv + R * lung_flow. `airway_resistance`
/// is in mBar/(L/s). Exact mass balance: bag = lung + leak + compression.
InhaleStep solve_inhale_step(const CircuitParameters& circuit, const InhaleLimbState& limb,
                             double bag_flow, double alveolar_pressure, double airway_resistance,
                             double dt);

/// Relief flow through the PEEP valve [mL/s]; zero at or below the setting.
double peep_valve_flow(const CircuitParameters& circuit, double p_aw);

struct ExhaleStep {
  double outflow = 0.0;  // mL/s leaving the lung
  double p_aw = 0.0;
};

/// Lung emptying through airway resistance in series with the PEEP valve.
ExhaleStep solve_exhale_step(const CircuitParameters& circuit, double alveolar_pressure,
                             double airway_resistance);

struct ValveRouting {
  bool bag_to_lung = false;
  bool lung_to_peep_valve = false;
};

/// Ideal bi-directional patient valve; never routes back into the bag.
constexpr ValveRouting patient_valve(BreathPhase phase) {
  return phase == BreathPhase::kInhale ? ValveRouting{true, false} : ValveRouting{false, true};
}

}  // namespace ventsim

#include "ventsim/breathing_circuit.hpp"

#include <algorithm>
#include <limits>

#include "ventsim/errors.hpp"

namespace ventsim {

void CircuitParameters::validate() const {
  if (inhale_dead_volume < 0.0 || exhale_dead_volume < 0.0) {
    throw ConfigError("circuit: dead volumes must be non-negative");
  }
  if (leak_coefficient < 0.0 || compression_compliance < 0.0 || valve_seat_compliance < 0.0) {
    throw ConfigError("circuit: loss coefficients must be non-negative");
  }
  if (peep_setting < 0.0) throw ConfigError("circuit: PEEP must be non-negative");
  if (valve_crack_margin < 0.0) throw ConfigError("circuit: crack margin must be non-negative");
  if (!(peep_valve_resistance > 0.0)) {
    throw ConfigError("circuit: PEEP valve resistance must be positive");
  }
}

CircuitParameters lossless_circuit() {
  CircuitParameters c;
  c.leak_coefficient = 0.0;
  c.compression_compliance = 0.0;
  c.valve_seat_compliance = 0.0;
  return c;
}

InhaleFlows route_inhale(const CircuitParameters& circuit, double bag_flow, double p_aw,
                         double dp_aw_dt, double seat_flow) {
  InhaleFlows f;
  f.leak = circuit.leak_coefficient * p_aw;
  f.compression = circuit.compression_compliance * dp_aw_dt + seat_flow;
  f.lung = bag_flow - f.leak - f.compression;
  return f;
}

InhaleStep solve_inhale_step(const CircuitParameters& circuit, const InhaleLimbState& limb,
                             double bag_flow, double alveolar_pressure, double airway_resistance,
                             double dt) {
  const double k = circuit.leak_coefficient;
  const double cc = circuit.compression_compliance;
  const double p_prev = limb.pressure;
  InhaleStep out;
  out.limb = limb;

  double seat_flow = 0.0;
  if (!limb.valve_open) {
    // Valve still closed: the bag only pressurizes the limb and the seat.
    const double c_total = cc + circuit.valve_seat_compliance;
    const double denom = c_total / dt + k;
    const double p_closed = denom > 0.0 ? (c_total / dt * p_prev + bag_flow) / denom
                                        : std::numeric_limits<double>::infinity();
    if (p_closed < alveolar_pressure) {
      const double dpdt = (p_closed - p_prev) / dt;
      out.p_aw = p_closed;
      out.flows = route_inhale(circuit, bag_flow, p_closed, dpdt,
                               circuit.valve_seat_compliance * dpdt);
      out.flows.lung = 0.0;  // residue is rounding only
      out.limb.pressure = p_closed;
      return out;
    }
    out.limb.valve_open = true;
    seat_flow = circuit.valve_seat_compliance * (alveolar_pressure - p_prev) / dt;
  }

  const double r = airway_resistance * 1.0e-3;  // mBar per mL/s
  const double available = bag_flow - seat_flow;
  double q = (available - k * alveolar_pressure - cc * (alveolar_pressure - p_prev) / dt) /
             (1.0 + k * r + cc * r / dt);
  double p = 0.0;
  const bool decoupled = q < 0.0;
  if (decoupled) {
    // Bag cannot hold the valve open; limb decouples from the lung.
    q = 0.0;
    const double denom = k + cc / dt;
    p = denom > 0.0 ? (available + cc * p_prev / dt) / denom : alveolar_pressure;
  } else {
    p = alveolar_pressure + r * q;
  }
  out.p_aw = p;
  out.flows = route_inhale(circuit, bag_flow, p, (p - p_prev) / dt, seat_flow);
  if (decoupled) out.flows.lung = 0.0;
  out.limb.pressure = p;
  return out;
}

double peep_valve_flow(const CircuitParameters& circuit, double p_aw) {
  const double over = p_aw - circuit.peep_setting;
  return over > 0.0 ? over / circuit.peep_valve_resistance * 1.0e3 : 0.0;
}

ExhaleStep solve_exhale_step(const CircuitParameters& circuit, double alveolar_pressure,
                             double airway_resistance) {
  ExhaleStep out;
  const double over = alveolar_pressure - circuit.peep_setting;
  if (over <= 0.0) {
    out.p_aw = alveolar_pressure;
    return out;
  }
  out.outflow = over / (airway_resistance + circuit.peep_valve_resistance) * 1.0e3;
  out.p_aw = alveolar_pressure - airway_resistance * out.outflow * 1.0e-3;
  return out;
}

}  // namespace ventsim

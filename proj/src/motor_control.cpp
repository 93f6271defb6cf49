#include "ventsim/motor_control.hpp"

#include <cmath>

#include "ventsim/errors.hpp"
#include "ventsim/units.hpp"

namespace ventsim {

double breath_period(const VentSettings& settings) { return 60.0 / settings.bpm; }

TrajectoryPoint reference_trajectory(const VentSettings& settings, double phi_0, double phi_tgt,
                                     double t) {
  const double period = breath_period(settings);
  const double t_inhale = period * settings.ie_fraction_inhale();
  const double t_exhale = period - t_inhale;
  const double inhale_slope = (phi_tgt - phi_0) / t_inhale;
  const double exhale_slope = (phi_0 - phi_tgt) / t_exhale;
  if (t < t_inhale) return {phi_0 + inhale_slope * t, inhale_slope};
  return {phi_tgt + exhale_slope * (t - t_inhale), exhale_slope};
}

void MotorParameters::validate() const {
  if (!(resistance > 0.0 && inductance > 0.0 && torque_constant > 0.0 && inertia > 0.0)) {
    throw ConfigError("motor: R, L, torque constant and inertia must be positive");
  }
  if (back_emf_constant < 0.0 || viscous_friction < 0.0) {
    throw ConfigError("motor: back-EMF constant and friction must be non-negative");
  }
  if (!(supply_voltage > 0.0) || !(current_limit > 0.0)) {
    throw ConfigError("motor: supply voltage and current limit must be positive");
  }
  if (!(phi_lower_stop < phi_upper_stop)) throw ConfigError("motor: invalid end stops");
  if (paddles < 1) throw ConfigError("motor: at least one paddle");
}

void PiGains::validate() const {
  const double g[] = {kp_pos, ki_pos, kp_vel, ki_vel, kp_cur, ki_cur};
  for (double v : g) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("gains: must be finite and >= 0");
  }
  if (!(pos_integral_limit >= 0.0 && vel_integral_limit >= 0.0 && cur_integral_limit >= 0.0) ||
      !std::isfinite(pos_integral_limit + vel_integral_limit + cur_integral_limit)) {
    throw ConfigError("gains: integrator clamps must be finite and >= 0");
  }
}

CascadeState pi_cascade_step(const PiGains& gains, const MotorParameters& motor,
                             const CascadeState& state, double phi_ref, double phi_dot_ref,
                             double load_torque_nmm, double dt) {
  CascadeState next = state;
  const MotorState& m = state.motor;
  CascadeIntegrators& integ = next.integrators;

  const double pos_err = phi_ref - m.phi;
  integ.position = std::clamp(integ.position + gains.ki_pos * pos_err * dt,
                              -gains.pos_integral_limit, gains.pos_integral_limit);
  const double vel_cmd = phi_dot_ref + gains.kp_pos * pos_err + integ.position;

  const double vel_err = vel_cmd - m.phi_dot;
  const double cur_unsat = gains.kp_vel * vel_err + integ.velocity + gains.ki_vel * vel_err * dt;
  const double cur_cmd = std::clamp(cur_unsat, -motor.current_limit, motor.current_limit);
  if (cur_cmd == cur_unsat) {
    integ.velocity = std::clamp(integ.velocity + gains.ki_vel * vel_err * dt,
                                -gains.vel_integral_limit, gains.vel_integral_limit);
  }

  const double cur_err = cur_cmd - m.current;
  const double u_unsat = gains.kp_cur * cur_err + integ.current + gains.ki_cur * cur_err * dt;
  const double u = std::clamp(u_unsat, -motor.supply_voltage, motor.supply_voltage);
  if (u == u_unsat) {
    integ.current = std::clamp(integ.current + gains.ki_cur * cur_err * dt,
                               -gains.cur_integral_limit, gains.cur_integral_limit);
  }

  // Plant: explicit electrical step, semi-implicit mechanical step.
  MotorState& out = next.motor;
  out.applied_voltage = u;
  const double di =
      (u - motor.resistance * m.current - motor.back_emf_constant * m.phi_dot) / motor.inductance;
  out.current = m.current + di * dt;
  // Bag pressure pushes the paddles open regardless of direction of motion.
  const double torque = motor.torque_constant * m.current - motor.viscous_friction * m.phi_dot -
                        load_torque_nmm * units::kNmPerNmm;
  out.phi_dot = m.phi_dot + torque / motor.inertia * dt;
  out.phi = m.phi + out.phi_dot * dt;
  if (out.phi > motor.phi_upper_stop) {
    out.phi = motor.phi_upper_stop;
    out.phi_dot = std::min(out.phi_dot, 0.0);
  } else if (out.phi < motor.phi_lower_stop) {
    out.phi = motor.phi_lower_stop;
    out.phi_dot = std::max(out.phi_dot, 0.0);
  }
  return next;
}

}  // namespace ventsim

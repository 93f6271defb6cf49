#pragma once

#include <algorithm>

namespace ventsim {

/// Operator settings. I and E are positive integers (1:2 means I=1, E=2).
struct VentSettings {
  int bpm = 20;
  int inspiratory = 1;
  int expiratory = 2;
  double v_ref = 400.0;  // mL
  double peep = 5.0;     // mBar

  double ie_fraction_inhale() const {
    return static_cast<double>(inspiratory) / (inspiratory + expiratory);
  }
};

/// T_b = 60 s / BPM.
double breath_period(const VentSettings& settings);

struct TrajectoryPoint {
  double phi = 0.0;
  double phi_dot = 0.0;
};

/// Sawtooth motor reference for time t in [0, T_b): ramp from phi_0 to
/// phi_tgt over the inhale window, back to phi_0 over the exhale window.
TrajectoryPoint reference_trajectory(const VentSettings& settings, double phi_0, double phi_tgt,
                                     double t);

/// DC motor and gearbox, expressed at the gearbox output shaft.
struct MotorParameters {
  double resistance = 1.0;        // ohm
  double inductance = 5.0e-3;     // H
  double torque_constant = 2.0;   // N m / A at the output shaft
  double back_emf_constant = 2.0; // V s / rad at the output shaft
  double inertia = 0.01;          // kg m^2 at the output shaft
  double viscous_friction = 0.05; // N m s / rad
  double supply_voltage = 12.0;   // V
  double current_limit = 10.0;    // A
  double phi_lower_stop = -0.1;   // rad
  double phi_upper_stop = 0.5;    // rad, mechanical end stop
  int paddles = 2;

  void validate() const;
};

struct MotorState {
  double phi = 0.0;      // rad after gearbox
  double phi_dot = 0.0;  // rad/s
  double current = 0.0;  // A
  double applied_voltage = 0.0;  // V
};

struct PiGains {
  double kp_pos = 60.0;   // 1/s
  double ki_pos = 200.0;  // 1/s^2
  double kp_vel = 2.0;    // A s / rad
  double ki_vel = 40.0;   // A / rad
  double kp_cur = 2.5;    // V / A
  double ki_cur = 500.0;  // V / (A s)
  double pos_integral_limit = 0.5;  // rad/s of velocity command
  double vel_integral_limit = 8.0;  // A of current command
  double cur_integral_limit = 12.0; // V

  void validate() const;
};

/// Integrator states of the three loops.
struct CascadeIntegrators {
  double position = 0.0;
  double velocity = 0.0;
  double current = 0.0;
};

struct CascadeState {
  MotorState motor;
  CascadeIntegrators integrators;
};

/// One control period: position PI (plus velocity feedforward) -> velocity PI
/// -> current PI -> saturated voltage, then one explicit plant step with the
/// given load torque [N mm] opposing positive motion.
CascadeState pi_cascade_step(const PiGains& gains, const MotorParameters& motor,
                             const CascadeState& state, double phi_ref, double phi_dot_ref,
                             double load_torque_nmm, double dt);

}  // namespace ventsim

#pragma once

// Project-wide unit convention: volumes mL, pressures mBar (gauge unless
// stated otherwise), angles rad, time s, flow mL/s. Conversions to the
// sensor-facing L/min and to SI torque live here.

namespace ventsim::units {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kAmbientPressureMbar = 1013.25;

inline constexpr double kMlPerMm3 = 1.0e-3;
inline constexpr double kNPerMm2PerMbar = 1.0e-4;  // 1 mBar = 100 Pa
inline constexpr double kNmPerNmm = 1.0e-3;

constexpr double ml_per_s_to_l_per_min(double q) { return q * 0.06; }
constexpr double l_per_min_to_ml_per_s(double q) { return q / 0.06; }
constexpr double ml_per_s_to_l_per_s(double q) { return q * 1.0e-3; }

}  // namespace ventsim::units

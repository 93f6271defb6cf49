#pragma once

/**
 * @file bag_model.hpp
 * @brief Geometric model of a resuscitator bag squeezed by two paddles.
 *
 * The bag is a cylinder of radius r and length l. Each paddle rotates about
 * an axis at distance l_pad from the bag surface, so at motor angle phi it
 * has pushed x = l_pad * phi into the cylinder. With the normalized position
 * xb = (r - x) / r the remaining volume is l r^2 (pi - 2 psi(xb)).
 */

namespace ventsim {

struct BagGeometry {
  double r_ambu_mm = 50.0;
  double l_ambu_mm = 75.4836;
  double l_pad_mm = 100.0;
  double phi_0_rad = 0.0;
  double phi_max_rad = 0.5;
  double p_inf_mbar = 1013.25;  // absolute ambient

  /// Throws ConfigError when the dimensions are inconsistent.
  void validate() const;

  /// Angle at which the paddles meet at the bag center (xb = 0).
  double full_stroke_rad() const { return r_ambu_mm / l_pad_mm; }
};

/// psi(xb) = acos(xb) - xb sqrt(1 - xb^2), the area deficit of a circular
/// segment in units of r^2. Throws std::domain_error outside [0, 1] (beyond
/// a 1e-9 tolerance, which is clamped).
double chord_deficit(double x_bar);

/// xb for a motor angle, without range checks.
double normalized_position(const BagGeometry& geom, double phi);

/// Bag volume [mL] at motor angle phi. Requires 0 <= xb <= 1.
double bag_volume(const BagGeometry& geom, double phi);

/// Bag volume with the paddle position clamped to the contact range: for
/// phi < 0 the paddles are off the bag and nothing is displaced.
double contact_volume(const BagGeometry& geom, double phi);

/// Volume expelled between phi_0 and phi_tgt [mL].
double geometric_tidal_volume(const BagGeometry& geom, double phi_tgt);

/// Rate of change of the bag volume [mL/s]; negative while squeezing.
double bag_flow_rate(const BagGeometry& geom, double phi, double phi_dot);

/// Isothermal compression estimate of the absolute bag pressure [mBar] with
/// a lung of constant volume v_lung_ml attached.
double bag_pressure(const BagGeometry& geom, double phi, double v_lung_ml);

/// Contact area of one paddle [mm^2].
double paddle_area(const BagGeometry& geom, double phi);

/// Torque transmitted by one paddle [N mm] for a gauge pressure [mBar].
double paddle_torque(const BagGeometry& geom, double phi, double p_gauge_mbar);

}  // namespace ventsim

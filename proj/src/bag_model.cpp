#include "ventsim/bag_model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ventsim/errors.hpp"
#include "ventsim/units.hpp"

namespace ventsim {

namespace {

constexpr double kDomainTol = 1e-9;

double checked_x_bar(const BagGeometry& geom, double phi) {
  const double xb = normalized_position(geom, phi);
  if (xb < -kDomainTol || xb > 1.0 + kDomainTol) {
    throw std::domain_error("bag_model: paddle position outside bag (phi=" +
                            std::to_string(phi) + ")");
  }
  return std::clamp(xb, 0.0, 1.0);
}

}  // namespace

void BagGeometry::validate() const {
  if (!(r_ambu_mm > 0.0) || !(l_ambu_mm > 0.0) || !(l_pad_mm > 0.0)) {
    throw ConfigError("geometry: r_ambu, l_ambu and l_pad must be positive");
  }
  if (!(phi_0_rad >= 0.0) || !(phi_0_rad < phi_max_rad)) {
    throw ConfigError("geometry: require 0 <= phi_0 < phi_max");
  }
  if (l_pad_mm * phi_max_rad > r_ambu_mm * (1.0 + kDomainTol)) {
    throw ConfigError("geometry: l_pad * phi_max exceeds r_ambu (paddle passes bag center)");
  }
  if (!(p_inf_mbar > 0.0)) {
    throw ConfigError("geometry: p_inf must be positive");
  }
}

double chord_deficit(double x_bar) {
  if (x_bar < -kDomainTol || x_bar > 1.0 + kDomainTol || std::isnan(x_bar)) {
    throw std::domain_error("chord_deficit: x_bar outside [0, 1]");
  }
  const double xb = std::clamp(x_bar, 0.0, 1.0);
  return std::acos(xb) - xb * std::sqrt(1.0 - xb * xb);
}

double normalized_position(const BagGeometry& geom, double phi) {
  return (geom.r_ambu_mm - geom.l_pad_mm * phi) / geom.r_ambu_mm;
}

double bag_volume(const BagGeometry& geom, double phi) {
  const double xb = checked_x_bar(geom, phi);
  const double r = geom.r_ambu_mm;
  return geom.l_ambu_mm * r * r * (units::kPi - 2.0 * chord_deficit(xb)) * units::kMlPerMm3;
}

double contact_volume(const BagGeometry& geom, double phi) {
  return bag_volume(geom, std::clamp(phi, 0.0, geom.full_stroke_rad()));
}

double geometric_tidal_volume(const BagGeometry& geom, double phi_tgt) {
  return bag_volume(geom, geom.phi_0_rad) - bag_volume(geom, phi_tgt);
}

double bag_flow_rate(const BagGeometry& geom, double phi, double phi_dot) {
  const double xb = checked_x_bar(geom, phi);
  const double r = geom.r_ambu_mm;
  const double xb_dot = -geom.l_pad_mm * phi_dot / r;
  return 4.0 * geom.l_ambu_mm * r * r * xb_dot * std::sqrt(1.0 - xb * xb) * units::kMlPerMm3;
}

double bag_pressure(const BagGeometry& geom, double phi, double v_lung_ml) {
  const double denom = v_lung_ml + bag_volume(geom, phi);
  assert(denom > 0.0);
  return geom.p_inf_mbar * (v_lung_ml + bag_volume(geom, 0.0)) / denom;
}

double paddle_area(const BagGeometry& geom, double phi) {
  const double xb = checked_x_bar(geom, phi);
  return 2.0 * geom.l_ambu_mm * geom.r_ambu_mm * std::sqrt(1.0 - xb * xb);
}

double paddle_torque(const BagGeometry& geom, double phi, double p_gauge_mbar) {
  return geom.l_pad_mm * paddle_area(geom, phi) * p_gauge_mbar * units::kNPerMm2PerMbar;
}

}  // namespace ventsim

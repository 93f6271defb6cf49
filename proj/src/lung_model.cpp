#include "ventsim/lung_model.hpp"

#include <stdexcept>
#include <string>

#include "ventsim/errors.hpp"
#include "ventsim/units.hpp"

namespace ventsim {

void LungParameters::validate() const {
  if (!(c_1 > 0.0 && c_rs > 0.0 && c_2 > 0.0 && c_w > 0.0)) {
    throw ConfigError("patient: compliances must be positive");
  }
  if (!(lip > 0.0 && lip < uip)) {
    throw ConfigError("patient: require 0 < LIP < UIP");
  }
  if (!(c_rs < c_w)) {
    throw ConfigError("patient: C_rs must be below C_w for a positive lung compliance");
  }
  if (!(r_aw >= 0.0)) {
    throw ConfigError("patient: airway resistance must be non-negative");
  }
  if (!(frc_zeep >= 0.0)) {
    throw ConfigError("patient: FRC at ZEEP must be non-negative");
  }
}

double LungParameters::lung_compliance() const { return 1.0 / (1.0 / c_rs - 1.0 / c_w); }

LungParameters healthy_lung() { return LungParameters{}; }

LungParameters ards_lung() {
  LungParameters p;
  p.c_w = 93.0;
  p.r_aw = 5.0;
  p.frc_zeep = 1102.0;
  p.lip = 12.0;
  p.uip = 35.0;
  p.c_1 = 8.0;
  p.c_rs = 35.0;
  p.c_2 = 8.0;
  return p;
}

LungParameters lung_preset(std::string_view name) {
  if (name == "healthy") return healthy_lung();
  if (name == "ards") return ards_lung();
  throw ConfigError("unknown patient preset '" + std::string(name) + "'");
}

LungState lung_at_pressure(const LungParameters& params, double p) {
  return LungState{volume_from_pressure(params, p), p};
}

double volume_from_pressure(const LungParameters& params, double p) {
  if (p <= params.lip) return params.frc_zeep + params.c_1 * p;
  if (p <= params.uip) return params.volume_at_lip() + params.c_rs * (p - params.lip);
  return params.volume_at_uip() + params.c_2 * (p - params.uip);
}

double pressure_from_volume(const LungParameters& params, double v) {
  if (v < params.frc_zeep) {
    throw std::domain_error("pressure_from_volume: volume below FRC at ZEEP");
  }
  const double v_lip = params.volume_at_lip();
  if (v <= v_lip) return (v - params.frc_zeep) / params.c_1;
  const double v_uip = params.volume_at_uip();
  if (v <= v_uip) return params.lip + (v - v_lip) / params.c_rs;
  return params.uip + (v - v_uip) / params.c_2;
}

double airway_pressure(const LungParameters& params, const LungState& state, double flow_in) {
  return state.alveolar_pressure + params.r_aw * units::ml_per_s_to_l_per_s(flow_in);
}

LungStepResult step_lung(const LungParameters& params, const LungState& state, double flow_in,
                         double dt, double dt_max) {
  if (!(dt > 0.0) || dt > dt_max) {
    throw std::invalid_argument("step_lung: dt outside (0, dt_max]");
  }
  LungStepResult out;
  double v = state.volume + flow_in * dt;
  if (v < params.frc_zeep) {
    v = params.frc_zeep;
    out.clamped = true;
  }
  out.state.volume = v;
  out.state.alveolar_pressure = pressure_from_volume(params, v);
  return out;
}

}  // namespace ventsim

#pragma once

#include <string_view>

namespace ventsim {

/// Static piecewise-linear pressure-volume curve plus a linear airway
/// resistance. Compliances in mL/mBar, pressures in mBar gauge, volumes in mL.
struct LungParameters {
  double c_w = 200.0;       // chest wall compliance
  double r_aw = 5.0;        // airway resistance, mBar/(L/s)
  double frc_zeep = 2000.0; // lung volume at zero end-expiratory pressure
  double lip = 5.0;
  double uip = 35.0;
  double c_1 = 25.0;        // below LIP
  double c_rs = 60.0;       // between LIP and UIP
  double c_2 = 20.0;        // above UIP

  void validate() const;

  /// Lung compliance from 1/C_rs = 1/C_w + 1/C_L.
  double lung_compliance() const;

  double volume_at_lip() const { return frc_zeep + c_1 * lip; }
  double volume_at_uip() const { return volume_at_lip() + c_rs * (uip - lip); }
};

LungParameters healthy_lung();
LungParameters ards_lung();

/// "healthy" or "ards"; throws ConfigError otherwise.
LungParameters lung_preset(std::string_view name);

struct LungState {
  double volume = 0.0;          // mL
  double alveolar_pressure = 0.0;  // mBar gauge
};

/// Lung state resting at the given airway pressure.
LungState lung_at_pressure(const LungParameters& params, double p);

double volume_from_pressure(const LungParameters& params, double p);

/// Inverse of volume_from_pressure. Throws std::domain_error below FRC.
double pressure_from_volume(const LungParameters& params, double v);

/// p_aw = p_alv + R_aw * flow_in (flow converted to L/s, positive inflates).
double airway_pressure(const LungParameters& params, const LungState& state, double flow_in);

struct LungStepResult {
  LungState state;
  bool clamped = false;  // exhale would have undershot FRC
};

/// Explicit Euler volume step followed by a static pressure evaluation.
LungStepResult step_lung(const LungParameters& params, const LungState& state, double flow_in,
                         double dt, double dt_max = 1.0e-3 + 1.0e-9);

}  // namespace ventsim

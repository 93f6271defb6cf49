#include "ventsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ventsim/errors.hpp"
#include "ventsim/rng.hpp"

namespace ventsim {

void Patient::validate() const {
  if (disconnected) {
    if (!(orifice_resistance > 0.0)) throw ConfigError("patient: orifice resistance must be > 0");
  } else {
    lung.validate();
  }
}

Patient patient_preset(const std::string& name) {
  Patient p;
  p.label = name;
  if (name == "disconnected") {
    p.disconnected = true;
    return p;
  }
  p.lung = lung_preset(name);
  return p;
}

std::string describe(const EventChange& change) {
  struct Visitor {
    std::string operator()(const PeepChange& c) const { return fmt::format("peep={:g}", c.peep); }
    std::string operator()(const PatientChange& c) const {
      return fmt::format("patient={}", c.patient.label);
    }
    std::string operator()(const VRefChange& c) const {
      return fmt::format("v_ref={:g}", c.v_ref);
    }
    std::string operator()(const BpmChange& c) const { return fmt::format("bpm={}", c.bpm); }
    std::string operator()(const IeChange& c) const {
      return fmt::format("ie={}:{}", c.inspiratory, c.expiratory);
    }
    std::string operator()(const AdaptationToggle& c) const {
      return fmt::format("adaptation={}", c.enabled ? "on" : "off");
    }
  };
  return std::visit(Visitor{}, change);
}

namespace {

void validate_settings_physical(const VentSettings& s, const std::string& where) {
  if (s.bpm < 1 || s.bpm > 120) throw ConfigError(where + ": bpm must be in [1, 120]");
  if (s.inspiratory < 1 || s.expiratory < 1) {
    throw ConfigError(where + ": I and E must be positive integers");
  }
  if (!(s.v_ref > 0.0)) throw ConfigError(where + ": v_ref must be positive");
  if (s.peep < 0.0) throw ConfigError(where + ": peep must be non-negative");
}

}  // namespace

void Scenario::validate() const {
  validate_settings_physical(settings, "settings");
  patient.validate();
  circuit.validate();
  geometry.validate();
  motor.validate();
  gains.validate();
  flow_sensor.validate();
  pressure_sensor.validate();
  if (thresholds) thresholds->validate();
  if (!(limits.phi_min < limits.phi_max)) throw ConfigError("limits: phi_min must be < phi_max");
  if (limits.phi_min < geometry.phi_0_rad || limits.phi_max > geometry.phi_max_rad + 1e-12) {
    throw ConfigError("limits: set-point range must lie within [phi_0, phi_max] of the bag");
  }
  if (limits.phi_max > motor.phi_upper_stop) {
    throw ConfigError("limits: set-point range exceeds the motor end stop");
  }
  if (adaptation.phi_tgt < limits.phi_min || adaptation.phi_tgt > limits.phi_max) {
    throw ConfigError("adaptation: initial phi_tgt outside set-point limits");
  }
  if (!(adaptation.gain >= 0.0)) throw ConfigError("adaptation: gain must be non-negative");
  if (n_breaths < 1) throw ConfigError("n_breaths must be >= 1");
  if (warmup_breaths < 0) throw ConfigError("warmup_breaths must be >= 0");
  if (!(max_step > 0.0) || max_step > 1.0e-3 + 1e-15) {
    throw ConfigError("max_step must be in (0, 1 ms]");
  }
  long last = 0;
  for (const auto& e : events) {
    if (e.breath < 0) throw ConfigError("events: breath index must be >= 0");
    if (e.breath < last) throw ConfigError("events: must be sorted by breath index");
    last = e.breath;
    if (const auto* c = std::get_if<PatientChange>(&e.change)) c->patient.validate();
    if (const auto* c = std::get_if<PeepChange>(&e.change); c && c->peep < 0.0) {
      throw ConfigError("events: peep must be non-negative");
    }
    if (const auto* c = std::get_if<VRefChange>(&e.change); c && !(c->v_ref > 0.0)) {
      throw ConfigError("events: v_ref must be positive");
    }
    if (const auto* c = std::get_if<BpmChange>(&e.change); c && (c->bpm < 1 || c->bpm > 120)) {
      throw ConfigError("events: bpm must be in [1, 120]");
    }
    if (const auto* c = std::get_if<IeChange>(&e.change);
        c && (c->inspiratory < 1 || c->expiratory < 1)) {
      throw ConfigError("events: I and E must be positive integers");
    }
  }
}

AlarmThresholds Scenario::resolved_thresholds() const {
  return thresholds ? *thresholds : default_thresholds(settings);
}

long samples_per_breath(const VentSettings& settings, double max_step) {
  const long parts = settings.inspiratory + settings.expiratory;
  const double period = breath_period(settings);
  long n = static_cast<long>(std::ceil(period / max_step - 1e-9));
  n = (n + parts - 1) / parts * parts;
  return n;
}

namespace {

class Simulator {
 public:
  explicit Simulator(const Scenario& sc)
      : sc_(sc),
        settings_(sc.settings),
        patient_(sc.patient),
        circuit_(sc.circuit),
        adapt_(sc.adaptation),
        flow_model_(sc.flow_sensor),
        thresholds_(sc.resolved_thresholds()),
        rng_(sc.seed) {
    circuit_.peep_setting = settings_.peep;
    if (sc.random_flow_bias) flow_model_.bias_pct = draw_flow_bias_pct(flow_model_, rng_);
    if (!patient_.disconnected) lung_ = lung_at_pressure(patient_.lung, circuit_.peep_setting);
    cascade_.motor.phi = sc.geometry.phi_0_rad;
    trace_.scenario_name = sc.name;
    trace_.flow_bias_pct = flow_model_.bias_pct;
  }

  SimulationTrace run() {
    for (long b = 0; b < sc_.n_breaths; ++b) {
      if (b == 0) apply_events(0, /*peep_only=*/true, /*skip_peep=*/false);
      apply_events(b, false, /*skip_peep=*/true);
      run_breath(b);
    }
    return std::move(trace_);
  }

 private:
  void apply_events(long breath, bool peep_only, bool skip_peep) {
    for (const auto& e : sc_.events) {
      if (e.breath != breath) continue;
      const bool is_peep = std::holds_alternative<PeepChange>(e.change);
      if ((peep_only && !is_peep) || (skip_peep && is_peep)) continue;
      std::visit([this](const auto& c) { apply(c); }, e.change);
      trace_.event_log.push_back(
          fmt::format("t={:.4f} breath={} {}", t_, breath, describe(e.change)));
    }
  }

  void apply(const PeepChange& c) {
    settings_.peep = c.peep;
    circuit_.peep_setting = c.peep;
  }
  void apply(const PatientChange& c) {
    const double p_alv = patient_.disconnected ? 0.0 : lung_.alveolar_pressure;
    patient_ = c.patient;
    if (!patient_.disconnected) lung_ = lung_at_pressure(patient_.lung, std::max(p_alv, 0.0));
  }
  void apply(const VRefChange& c) { settings_.v_ref = c.v_ref; }
  void apply(const BpmChange& c) { settings_.bpm = c.bpm; }
  void apply(const IeChange& c) {
    settings_.inspiratory = c.inspiratory;
    settings_.expiratory = c.expiratory;
  }
  void apply(const AdaptationToggle& c) { adapt_.enabled = c.enabled; }

  double airway_resistance() const {
    return patient_.disconnected ? patient_.orifice_resistance : patient_.lung.r_aw;
  }

  void run_breath(long b) {
    const BagGeometry& geom = sc_.geometry;
    const long n = samples_per_breath(settings_, sc_.max_step);
    const long n_in = n * settings_.inspiratory / (settings_.inspiratory + settings_.expiratory);
    const double period = breath_period(settings_);
    const double dt = period / static_cast<double>(n);
    const double phi_0 = geom.phi_0_rad;
    const double phi_tgt = adapt_.phi_tgt;

    BreathRecord rec;
    rec.k = b;
    rec.t_start = t_;
    rec.phi_tgt_used = phi_tgt;
    rec.v_ref = settings_.v_ref;

    InhaleLimbState limb;
    bool inhale = true;
    bool truncated = false;
    long trunc_j = 0;
    double trunc_phi = 0.0;
    double p_peak = -1.0;
    double p_meas = 0.0;
    double positive_volume = 0.0;
    double bag_out = 0.0;
    double v_lung_in = 0.0;
    double v_leak = 0.0;
    double v_comp = 0.0;

    auto end_inhale = [&](long j) {
      inhale = false;
      rec.inhale_samples = j;
      rec.p_peak = std::max(p_peak, 0.0);
      // Next breath's PEEP change is dialled in now.
      apply_events(b + 1, /*peep_only=*/true, /*skip_peep=*/false);
      auto d = check_alarms(thresholds_, rec, 0.0, 0.0, AlarmStage::kInhaleEnd, t_);
      for (auto& ev : d.events) rec.alarms.push_back(ev);
    };

    for (long j = 0; j < n; ++j) {
      if (inhale && j == n_in) end_inhale(j);

      TrajectoryPoint ref;
      if (truncated) {
        const double remaining = static_cast<double>(n - trunc_j) * dt;
        const double slope = (phi_0 - trunc_phi) / remaining;
        ref = {trunc_phi + slope * static_cast<double>(j - trunc_j) * dt, slope};
      } else {
        ref = reference_trajectory(settings_, phi_0, phi_tgt, static_cast<double>(j) * dt);
      }

      const double phi_old = cascade_.motor.phi;
      const double p_circuit = inhale ? limb.pressure : 0.0;
      const double phi_contact = std::min(phi_old, geom.full_stroke_rad());
      const double load =
          phi_contact > 0.0 ? sc_.motor.paddles * paddle_torque(geom, phi_contact, p_circuit) : 0.0;
      cascade_ = pi_cascade_step(sc_.gains, sc_.motor, cascade_, ref.phi, ref.phi_dot, load, dt);
      const double phi_new = cascade_.motor.phi;
      const double expelled = contact_volume(geom, phi_old) - contact_volume(geom, phi_new);

      double lung_flow = 0.0;
      double p_aw = 0.0;
      const double r_aw = airway_resistance();
      if (inhale) {
        const double bag_flow = std::max(expelled, 0.0) / dt;  // negative: refill from ambient
        const double p_alv = patient_.disconnected ? 0.0 : lung_.alveolar_pressure;
        const InhaleStep st = solve_inhale_step(circuit_, limb, bag_flow, p_alv, r_aw, dt);
        limb = st.limb;
        lung_flow = st.flows.lung;
        p_aw = st.p_aw;
        bag_out += bag_flow * dt;
        v_lung_in += lung_flow * dt;
        v_leak += st.flows.leak * dt;
        v_comp += st.flows.compression * dt;
      } else if (!patient_.disconnected) {
        const ExhaleStep ex = solve_exhale_step(circuit_, lung_.alveolar_pressure, r_aw);
        lung_flow = -ex.outflow;
        p_aw = ex.p_aw;
      }
      if (!patient_.disconnected) {
        const LungStepResult ls = step_lung(patient_.lung, lung_, lung_flow, dt, sc_.max_step + 1e-12);
        lung_ = ls.state;
      }

      const FlowSample fs = sample_flow(flow_model_, lung_flow, rng_);
      p_meas = sample_pressure(sc_.pressure_sensor, p_aw, rng_);
      if (fs.clipped) ++rec.clipped_samples;
      positive_volume += std::max(fs.measured, 0.0);
      t_ = rec.t_start + static_cast<double>(j + 1) * dt;

      if (sc_.record_trace) {
        TraceSample s;
        s.t = t_;
        s.breath = b;
        s.inhale = inhale;
        s.phi = phi_new;
        s.phi_ref = ref.phi;
        s.voltage = cascade_.motor.applied_voltage;
        s.current = cascade_.motor.current;
        s.flow_true = lung_flow;
        s.flow_measured = fs.measured;
        s.p_aw = p_aw;
        s.p_measured = p_meas;
        s.v_lung = patient_.disconnected ? 0.0 : lung_.volume;
        s.v_bag = bag_volume(geom, std::clamp(phi_new, 0.0, geom.full_stroke_rad()));
        trace_.samples.push_back(s);
      }

      if (inhale) {
        p_peak = std::max(p_peak, p_meas);
        auto d = check_alarms(thresholds_, rec, 0.0, p_meas, AlarmStage::kLiveInhale, t_);
        if (d.end_inhale_now) {
          for (auto& ev : d.events) rec.alarms.push_back(ev);
          truncated = true;
          trunc_j = j + 1;
          trunc_phi = phi_new;
          end_inhale(j + 1);
        }
      }
    }
    if (inhale) end_inhale(n);

    rec.t_end = t_;
    rec.exhale_samples = n - rec.inhale_samples;
    rec.truncated = truncated;
    rec.v_tidal = positive_volume * dt;
    rec.v_delivered = v_lung_in;
    rec.v_bag_expelled = bag_out;
    rec.v_leak = v_leak;
    rec.v_compression = v_comp;
    rec.p_end_exp = p_meas;
    rec.peep_setting = circuit_.peep_setting;

    const double residue = bag_out - (v_lung_in + v_leak + v_comp);
    if (std::abs(residue) > 0.5) {
      throw InvariantViolation(fmt::format(
          "breath {}: volume bookkeeping off by {:.3f} mL (bag {:.3f}, lung {:.3f}, leak {:.3f}, "
          "compression {:.3f})",
          b, residue, bag_out, v_lung_in, v_leak, v_comp));
    }
    if (!(rec.v_tidal >= 0.0) || !std::isfinite(rec.v_tidal)) {
      throw InvariantViolation(fmt::format("breath {}: invalid tidal volume", b));
    }

    trace_.breaths.push_back(rec);
    const double mv = minute_volume(trace_.breaths, t_);
    const bool window_full = t_ >= 60.0 - 1e-9;
    auto d = check_alarms(thresholds_, rec, mv, 0.0, AlarmStage::kBreathEnd, t_, window_full);
    auto& stored = trace_.breaths.back();
    for (auto& ev : d.events) stored.alarms.push_back(ev);
    for (const auto& ev : stored.alarms) trace_.alarms.push_back(ev);

    const AdaptationStep step =
        adapt_setpoint(adapt_, settings_.v_ref, rec.v_tidal, sc_.limits);
    adapt_ = step.state;
    stored.adaptation_saturated = step.saturated;
  }

  const Scenario& sc_;
  VentSettings settings_;
  Patient patient_;
  CircuitParameters circuit_;
  AdaptationState adapt_;
  FlowSensorModel flow_model_;
  AlarmThresholds thresholds_;
  Rng rng_;
  LungState lung_;
  CascadeState cascade_;
  double t_ = 0.0;
  SimulationTrace trace_;
};

}  // namespace

SimulationTrace run_scenario(const Scenario& scenario) {
  scenario.validate();
  Simulator sim(scenario);
  return sim.run();
}

}  // namespace ventsim

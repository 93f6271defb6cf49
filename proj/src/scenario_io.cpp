#include "ventsim/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ventsim/errors.hpp"

namespace ventsim {

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::kSingle: return "single";
    case StudyKind::kParameterStudy: return "parameter-study";
    case StudyKind::kTrackingStudy: return "tracking-study";
    case StudyKind::kTransientStudy: return "transient-study";
  }
  return "single";
}

StudyKind parse_study_kind(std::string_view name) {
  for (auto k : {StudyKind::kSingle, StudyKind::kParameterStudy, StudyKind::kTrackingStudy,
                 StudyKind::kTransientStudy}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown study '{}' (single, parameter-study, tracking-study, "
                                "transient-study)",
                                name));
}

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kNone: return "none";
    case CheckKind::kLossless: return "lossless";
    case CheckKind::kRepeatability: return "repeatability";
    case CheckKind::kDisconnection: return "disconnection";
    case CheckKind::kOverdrive: return "overdrive";
    case CheckKind::kNominal: return "nominal";
    case CheckKind::kMinuteVolume: return "minute-volume";
    case CheckKind::kStudy: return "study";
  }
  return "none";
}

CheckKind parse_check_kind(std::string_view name) {
  for (auto k : {CheckKind::kNone, CheckKind::kLossless, CheckKind::kRepeatability,
                 CheckKind::kDisconnection, CheckKind::kOverdrive, CheckKind::kNominal,
                 CheckKind::kMinuteVolume, CheckKind::kStudy}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown check kind '{}'", name));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("expected a number, got '{}'", s));
  }
  return v;
}

long parse_long(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("expected an integer, got '{}'", s));
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("expected a non-negative integer, got '{}'", s));
  }
  return v;
}

int parse_int(std::string_view s) {
  const long v = parse_long(s);
  if (v < -1000000 || v > 1000000) throw ConfigError(fmt::format("integer out of range: {}", v));
  return static_cast<int>(v);
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "no") return false;
  throw ConfigError(fmt::format("expected true/false, got '{}'", s));
}

std::pair<int, int> parse_ie(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ConfigError(fmt::format("expected I:E like 1:2, got '{}'", s));
  return {parse_int(parts[0]), parse_int(parts[1])};
}

std::string fmt_double(double v) { return fmt::format("{}", v); }
std::string fmt_bool(bool v) { return v ? "true" : "false"; }

template <class T, class F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

ParameterCase parse_case(std::string_view s) {
  const auto parts = split(s, '@');
  if (parts.size() != 2) {
    throw ConfigError(fmt::format("expected case like ards@10, got '{}'", s));
  }
  ParameterCase c;
  c.patient = patient_preset(std::string(parts[0]));
  c.peep = parse_double(parts[1]);
  c.label = fmt::format("{}_peep{}", parts[0], fmt_double(c.peep));
  return c;
}

EventChange parse_event_change(std::string_view kind, std::string_view value) {
  if (kind == "peep_mbar") return PeepChange{parse_double(value)};
  if (kind == "patient") return PatientChange{patient_preset(std::string(value))};
  if (kind == "v_ref_mL") return VRefChange{parse_double(value)};
  if (kind == "bpm") return BpmChange{parse_int(value)};
  if (kind == "ie") {
    const auto [i, e] = parse_ie(value);
    return IeChange{i, e};
  }
  if (kind == "adaptation") return AdaptationToggle{parse_bool(value)};
  throw ConfigError(fmt::format(
      "unknown event kind '{}' (peep_mbar, patient, v_ref_mL, bpm, ie, adaptation)", kind));
}

std::string format_event(const ScenarioEvent& e) {
  struct Visitor {
    std::string operator()(const PeepChange& c) const {
      return "peep_mbar " + fmt_double(c.peep);
    }
    std::string operator()(const PatientChange& c) const { return "patient " + c.patient.label; }
    std::string operator()(const VRefChange& c) const { return "v_ref_mL " + fmt_double(c.v_ref); }
    std::string operator()(const BpmChange& c) const { return fmt::format("bpm {}", c.bpm); }
    std::string operator()(const IeChange& c) const {
      return fmt::format("ie {}:{}", c.inspiratory, c.expiratory);
    }
    std::string operator()(const AdaptationToggle& c) const {
      return std::string("adaptation ") + (c.enabled ? "on" : "off");
    }
  };
  return fmt::format("{} {}", e.breath, std::visit(Visitor{}, e.change));
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(ScenarioFile&, std::string_view)> set;
  std::function<std::string(const ScenarioFile&)> get;
};

template <class Ref>
Field number(std::string section, std::string key, Ref ref) {
  return Field{std::move(section), std::move(key),
               [ref](ScenarioFile& f, std::string_view v) { ref(f) = parse_double(v); },
               [ref](const ScenarioFile& f) {
                 return fmt_double(ref(const_cast<ScenarioFile&>(f)));
               }};
}

template <class Ref>
Field integer(std::string section, std::string key, Ref ref) {
  return Field{std::move(section), std::move(key),
               [ref](ScenarioFile& f, std::string_view v) {
                 using T = std::remove_reference_t<decltype(ref(f))>;
                 ref(f) = static_cast<T>(parse_long(v));
               },
               [ref](const ScenarioFile& f) {
                 return fmt::format("{}", ref(const_cast<ScenarioFile&>(f)));
               }};
}

template <class Ref>
Field boolean(std::string section, std::string key, Ref ref) {
  return Field{std::move(section), std::move(key),
               [ref](ScenarioFile& f, std::string_view v) { ref(f) = parse_bool(v); },
               [ref](const ScenarioFile& f) {
                 return fmt_bool(ref(const_cast<ScenarioFile&>(f)));
               }};
}

#define VS_REF(expr) [](ScenarioFile & f) -> auto& { return expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    t.push_back({"", "name", [](ScenarioFile& f, std::string_view v) { f.scenario.name = v; },
                 [](const ScenarioFile& f) { return f.scenario.name; }});

    t.push_back(integer("settings", "bpm", VS_REF(f.scenario.settings.bpm)));
    t.push_back({"settings", "ie",
                 [](ScenarioFile& f, std::string_view v) {
                   const auto [i, e] = parse_ie(v);
                   f.scenario.settings.inspiratory = i;
                   f.scenario.settings.expiratory = e;
                 },
                 [](const ScenarioFile& f) {
                   return fmt::format("{}:{}", f.scenario.settings.inspiratory,
                                      f.scenario.settings.expiratory);
                 }});
    t.push_back(number("settings", "v_ref_mL", VS_REF(f.scenario.settings.v_ref)));
    t.push_back(number("settings", "peep_mbar", VS_REF(f.scenario.settings.peep)));

    t.push_back({"patient", "preset",
                 [](ScenarioFile& f, std::string_view v) {
                   f.scenario.patient = patient_preset(std::string(v));
                 },
                 [](const ScenarioFile& f) { return f.scenario.patient.label; }});
    t.push_back(number("patient", "c_w_mL_per_mbar", VS_REF(f.scenario.patient.lung.c_w)));
    t.push_back(number("patient", "r_aw_mbar_s_per_L", VS_REF(f.scenario.patient.lung.r_aw)));
    t.push_back(number("patient", "frc_zeep_mL", VS_REF(f.scenario.patient.lung.frc_zeep)));
    t.push_back(number("patient", "lip_mbar", VS_REF(f.scenario.patient.lung.lip)));
    t.push_back(number("patient", "uip_mbar", VS_REF(f.scenario.patient.lung.uip)));
    t.push_back(number("patient", "c_1_mL_per_mbar", VS_REF(f.scenario.patient.lung.c_1)));
    t.push_back(number("patient", "c_rs_mL_per_mbar", VS_REF(f.scenario.patient.lung.c_rs)));
    t.push_back(number("patient", "c_2_mL_per_mbar", VS_REF(f.scenario.patient.lung.c_2)));
    t.push_back(number("patient", "orifice_resistance_mbar_s_per_L",
                       VS_REF(f.scenario.patient.orifice_resistance)));

    t.push_back(number("circuit", "inhale_dead_volume_mL",
                       VS_REF(f.scenario.circuit.inhale_dead_volume)));
    t.push_back(number("circuit", "exhale_dead_volume_mL",
                       VS_REF(f.scenario.circuit.exhale_dead_volume)));
    t.push_back(number("circuit", "leak_mL_per_s_mbar",
                       VS_REF(f.scenario.circuit.leak_coefficient)));
    t.push_back(number("circuit", "compression_mL_per_mbar",
                       VS_REF(f.scenario.circuit.compression_compliance)));
    t.push_back(number("circuit", "valve_seat_mL_per_mbar",
                       VS_REF(f.scenario.circuit.valve_seat_compliance)));
    t.push_back(number("circuit", "valve_crack_margin_mbar",
                       VS_REF(f.scenario.circuit.valve_crack_margin)));
    t.push_back(number("circuit", "peep_valve_resistance_mbar_s_per_L",
                       VS_REF(f.scenario.circuit.peep_valve_resistance)));

    t.push_back(number("geometry", "r_ambu_mm", VS_REF(f.scenario.geometry.r_ambu_mm)));
    t.push_back(number("geometry", "l_ambu_mm", VS_REF(f.scenario.geometry.l_ambu_mm)));
    t.push_back(number("geometry", "l_pad_mm", VS_REF(f.scenario.geometry.l_pad_mm)));
    t.push_back(number("geometry", "phi_0_rad", VS_REF(f.scenario.geometry.phi_0_rad)));
    t.push_back(number("geometry", "phi_max_rad", VS_REF(f.scenario.geometry.phi_max_rad)));
    t.push_back(number("geometry", "p_inf_mbar", VS_REF(f.scenario.geometry.p_inf_mbar)));

    t.push_back(number("motor", "resistance_ohm", VS_REF(f.scenario.motor.resistance)));
    t.push_back(number("motor", "inductance_H", VS_REF(f.scenario.motor.inductance)));
    t.push_back(number("motor", "torque_constant_Nm_per_A",
                       VS_REF(f.scenario.motor.torque_constant)));
    t.push_back(number("motor", "back_emf_V_s_per_rad",
                       VS_REF(f.scenario.motor.back_emf_constant)));
    t.push_back(number("motor", "inertia_kg_m2", VS_REF(f.scenario.motor.inertia)));
    t.push_back(number("motor", "viscous_friction_Nm_s_per_rad",
                       VS_REF(f.scenario.motor.viscous_friction)));
    t.push_back(number("motor", "supply_voltage_V", VS_REF(f.scenario.motor.supply_voltage)));
    t.push_back(number("motor", "current_limit_A", VS_REF(f.scenario.motor.current_limit)));
    t.push_back(number("motor", "phi_lower_stop_rad", VS_REF(f.scenario.motor.phi_lower_stop)));
    t.push_back(number("motor", "phi_upper_stop_rad", VS_REF(f.scenario.motor.phi_upper_stop)));
    t.push_back(integer("motor", "paddles", VS_REF(f.scenario.motor.paddles)));

    t.push_back(number("gains", "kp_pos_per_s", VS_REF(f.scenario.gains.kp_pos)));
    t.push_back(number("gains", "ki_pos_per_s2", VS_REF(f.scenario.gains.ki_pos)));
    t.push_back(number("gains", "kp_vel_A_s_per_rad", VS_REF(f.scenario.gains.kp_vel)));
    t.push_back(number("gains", "ki_vel_A_per_rad", VS_REF(f.scenario.gains.ki_vel)));
    t.push_back(number("gains", "kp_cur_V_per_A", VS_REF(f.scenario.gains.kp_cur)));
    t.push_back(number("gains", "ki_cur_V_per_A_s", VS_REF(f.scenario.gains.ki_cur)));
    t.push_back(number("gains", "pos_integral_limit_rad_per_s",
                       VS_REF(f.scenario.gains.pos_integral_limit)));
    t.push_back(number("gains", "vel_integral_limit_A",
                       VS_REF(f.scenario.gains.vel_integral_limit)));
    t.push_back(number("gains", "cur_integral_limit_V",
                       VS_REF(f.scenario.gains.cur_integral_limit)));

    t.push_back(boolean("adaptation", "enabled", VS_REF(f.scenario.adaptation.enabled)));
    t.push_back(number("adaptation", "phi_tgt_rad", VS_REF(f.scenario.adaptation.phi_tgt)));
    t.push_back(number("adaptation", "gain_rad_per_mL", VS_REF(f.scenario.adaptation.gain)));
    t.push_back(number("adaptation", "phi_min_rad", VS_REF(f.scenario.limits.phi_min)));
    t.push_back(number("adaptation", "phi_max_rad", VS_REF(f.scenario.limits.phi_max)));

    t.push_back(number("sensors", "flow_range_low_L_per_min",
                       VS_REF(f.scenario.flow_sensor.range_low)));
    t.push_back(number("sensors", "flow_range_high_L_per_min",
                       VS_REF(f.scenario.flow_sensor.range_high)));
    t.push_back(integer("sensors", "flow_resolution_bits",
                        VS_REF(f.scenario.flow_sensor.resolution_bits)));
    t.push_back(number("sensors", "flow_accuracy_pct", VS_REF(f.scenario.flow_sensor.accuracy_pct)));
    t.push_back(number("sensors", "flow_repeatability_pct",
                       VS_REF(f.scenario.flow_sensor.repeatability_pct)));
    t.push_back({"sensors", "flow_bias_pct",
                 [](ScenarioFile& f, std::string_view v) {
                   if (trim(v) == "random") {
                     f.scenario.random_flow_bias = true;
                     f.scenario.flow_sensor.bias_pct = 0.0;
                   } else {
                     f.scenario.random_flow_bias = false;
                     f.scenario.flow_sensor.bias_pct = parse_double(v);
                   }
                 },
                 [](const ScenarioFile& f) {
                   return f.scenario.random_flow_bias ? std::string("random")
                                                      : fmt_double(f.scenario.flow_sensor.bias_pct);
                 }});
    t.push_back(number("sensors", "pressure_range_low_mbar",
                       VS_REF(f.scenario.pressure_sensor.range_low)));
    t.push_back(number("sensors", "pressure_range_high_mbar",
                       VS_REF(f.scenario.pressure_sensor.range_high)));
    t.push_back(number("sensors", "pressure_noise_sd_mbar",
                       VS_REF(f.scenario.pressure_sensor.noise_sd)));

    auto thr = [](ScenarioFile& f) -> AlarmThresholds& {
      if (!f.scenario.thresholds) f.scenario.thresholds = default_thresholds(f.scenario.settings);
      return *f.scenario.thresholds;
    };
    auto alarm_field = [thr](std::string key, double AlarmThresholds::*member) {
      return Field{"alarms", std::move(key),
                   [thr, member](ScenarioFile& f, std::string_view v) {
                     thr(f).*member = parse_double(v);
                   },
                   [member](const ScenarioFile& f) {
                     return fmt_double(f.scenario.resolved_thresholds().*member);
                   }};
    };
    t.push_back(alarm_field("v_tidal_min_mL", &AlarmThresholds::v_tidal_min));
    t.push_back(alarm_field("minute_volume_min_mL_per_min", &AlarmThresholds::minute_volume_min));
    t.push_back(alarm_field("p_insp_max_mbar", &AlarmThresholds::p_insp_max));
    t.push_back(alarm_field("p_insp_min_mbar", &AlarmThresholds::p_insp_min));

    t.push_back(integer("run", "n_breaths", VS_REF(f.scenario.n_breaths)));
    t.push_back(integer("run", "warmup_breaths", VS_REF(f.scenario.warmup_breaths)));
    t.push_back({"run", "seed",
                 [](ScenarioFile& f, std::string_view v) { f.scenario.seed = parse_u64(v); },
                 [](const ScenarioFile& f) { return fmt::format("{}", f.scenario.seed); }});
    t.push_back(number("run", "max_step_s", VS_REF(f.scenario.max_step)));
    t.push_back(boolean("run", "record_trace", VS_REF(f.scenario.record_trace)));

    t.push_back({"study", "kind",
                 [](ScenarioFile& f, std::string_view v) { f.study.kind = parse_study_kind(v); },
                 [](const ScenarioFile& f) { return to_string(f.study.kind); }});
    t.push_back({"study", "phi_grid_rad",
                 [](ScenarioFile& f, std::string_view v) {
                   f.study.phi_grid.clear();
                   for (auto p : split(v, ',')) f.study.phi_grid.push_back(parse_double(p));
                 },
                 [](const ScenarioFile& f) { return join(f.study.phi_grid, fmt_double); }});
    t.push_back({"study", "cases",
                 [](ScenarioFile& f, std::string_view v) {
                   f.study.cases.clear();
                   for (auto p : split(v, ',')) f.study.cases.push_back(parse_case(p));
                 },
                 [](const ScenarioFile& f) {
                   return join(f.study.cases, [](const ParameterCase& c) {
                     return c.patient.label + "@" + fmt_double(c.peep);
                   });
                 }});
    t.push_back(integer("study", "averaged_breaths", VS_REF(f.study.averaged_breaths)));
    t.push_back({"study", "v_refs_mL",
                 [](ScenarioFile& f, std::string_view v) {
                   f.study.v_refs.clear();
                   for (auto p : split(v, ',')) f.study.v_refs.push_back(parse_double(p));
                 },
                 [](const ScenarioFile& f) { return join(f.study.v_refs, fmt_double); }});
    t.push_back({"study", "bpms",
                 [](ScenarioFile& f, std::string_view v) {
                   f.study.bpms.clear();
                   for (auto p : split(v, ',')) f.study.bpms.push_back(parse_int(p));
                 },
                 [](const ScenarioFile& f) {
                   return join(f.study.bpms, [](int b) { return fmt::format("{}", b); });
                 }});
    t.push_back(integer("study", "measured_breaths", VS_REF(f.study.measured_breaths)));
    t.push_back(integer("study", "breaths_before", VS_REF(f.study.breaths_before)));
    t.push_back(integer("study", "breaths_after", VS_REF(f.study.breaths_after)));

    t.push_back({"check", "kind",
                 [](ScenarioFile& f, std::string_view v) { f.check = parse_check_kind(v); },
                 [](const ScenarioFile& f) { return to_string(f.check); }});
    return t;
  }();
  return table;
}

#undef VS_REF

const Field* find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

}  // namespace

ScenarioFile parse_scenario(std::string_view text, const std::string& source) {
  std::vector<Entry> entries;
  std::string section;
  bool schema_seen = false;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> sections;
  int line_no = 0;
  auto fail = [&](int line, const std::string& msg) -> ConfigError {
    return ConfigError(fmt::format("{}:{}: {}", source, line, msg));
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known = {
          "settings", "patient", "circuit", "geometry", "motor", "gains", "adaptation",
          "sensors",  "alarms",  "run",     "study",    "check", "events"};
      if (!known.count(section)) throw fail(line_no, fmt::format("unknown section [{}]", section));
      if (!sections.insert(section).second) {
        throw fail(line_no, fmt::format("section [{}] appears twice", section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw fail(line_no, "empty key");
    if (value.empty()) throw fail(line_no, fmt::format("missing value for '{}'", key));
    if (section.empty() && key == "schema") {
      if (value != kScenarioSchema) {
        throw fail(line_no, fmt::format("unsupported schema '{}' (expected {})", value,
                                        kScenarioSchema));
      }
      schema_seen = true;
      continue;
    }
    if (section == "events") {
      if (key != "event") throw fail(line_no, "[events] only takes 'event = <breath> <kind> <value>'");
    } else {
      if (!find_field(section, key)) {
        throw fail(line_no, fmt::format("unknown key '{}' in {}", key,
                                        section.empty() ? "top level" : "[" + section + "]"));
      }
      if (!seen.insert({section, key}).second) {
        throw fail(line_no, fmt::format("duplicate key '{}'", key));
      }
    }
    entries.push_back(Entry{section, key, value, line_no});
  }
  if (!schema_seen) {
    throw ConfigError(fmt::format("{}: missing 'schema = {}' line", source, kScenarioSchema));
  }

  ScenarioFile file;
  auto apply = [&](const Entry& e) {
    try {
      if (e.section == "events") {
        const auto first = e.value.find(' ');
        const auto rest = first == std::string::npos ? std::string() : e.value.substr(first + 1);
        const auto second = rest.find(' ');
        if (first == std::string::npos || second == std::string::npos) {
          throw ConfigError("expected 'event = <breath> <kind> <value>'");
        }
        ScenarioEvent ev;
        ev.breath = parse_long(std::string_view(e.value).substr(0, first));
        ev.change = parse_event_change(trim(std::string_view(rest).substr(0, second)),
                                       trim(std::string_view(rest).substr(second + 1)));
        file.scenario.events.push_back(std::move(ev));
        return;
      }
      find_field(e.section, e.key)->set(file, e.value);
    } catch (const ConfigError& err) {
      throw fail(e.line, fmt::format("[{}] {}: {}", e.section, e.key, err.what()));
    }
  };
  // Presets first so explicit values override them; settings before alarms
  // so derived default thresholds see the file's v_ref and bpm.
  for (const auto& e : entries) {
    if (e.section == "patient" && e.key == "preset") apply(e);
  }
  for (const auto& e : entries) {
    if (e.section == "settings") apply(e);
  }
  for (const auto& e : entries) {
    if (!(e.section == "patient" && e.key == "preset") && e.section != "settings") apply(e);
  }
  // Default thresholds are resolved at load time; later v_ref events do not move them.
  if (!file.scenario.thresholds) file.scenario.thresholds = default_thresholds(file.scenario.settings);
  std::stable_sort(file.scenario.events.begin(), file.scenario.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.breath < b.breath; });
  try {
    file.scenario.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(fmt::format("{}: {}", source, err.what()));
  }
  return file;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read scenario file '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

std::string format_scenario(const ScenarioFile& file) {
  std::string out = fmt::format("schema = {}\n", kScenarioSchema);
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      section = f.section;
      out += fmt::format("\n[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", f.key, f.get(file));
  }
  out += "\n[events]\n";
  for (const auto& e : file.scenario.events) out += fmt::format("event = {}\n", format_event(e));
  return out;
}

std::vector<std::string> validate_settings(const VentSettings& s) {
  std::vector<std::string> v;
  const bool peep_ok = s.peep == 5.0 || s.peep == 10.0 || s.peep == 15.0 || s.peep == 20.0;
  if (!peep_ok) v.push_back(fmt::format("PEEP must be multiple of 5 in [5,20] (got {})", s.peep));
  if (s.bpm < 10 || s.bpm > 30 || s.bpm % 2 != 0) {
    v.push_back(fmt::format("BPM must be in 10..30 in steps of 2 (got {})", s.bpm));
  }
  if (s.inspiratory < 1 || s.expiratory < s.inspiratory || s.expiratory > 3 * s.inspiratory) {
    v.push_back(fmt::format("I:E must be within 1:1 to 1:3 (got {}:{})", s.inspiratory,
                            s.expiratory));
  }
  if (!(s.v_ref >= 350.0 && s.v_ref <= 450.0)) {
    v.push_back(fmt::format("tidal volume target must be in [350,450] mL (got {})", s.v_ref));
  }
  return v;
}

}  // namespace ventsim

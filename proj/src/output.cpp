#include "ventsim/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <fmt/format.h>

namespace ventsim {

namespace {

std::string alarm_codes(const BreathRecord& b) {
  std::string codes;
  for (const auto& a : b.alarms) codes.push_back(static_cast<char>(a.code));
  return codes;
}

struct BreathStats {
  long n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

BreathStats tidal_stats(const SimulationTrace& run, long skip) {
  BreathStats s;
  double sum = 0.0;
  double sum_sq = 0.0;
  s.min = 1e300;
  s.max = -1e300;
  for (std::size_t k = static_cast<std::size_t>(std::max(skip, 0L)); k < run.breaths.size(); ++k) {
    const double v = run.breaths[k].v_tidal;
    sum += v;
    sum_sq += v * v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    ++s.n;
  }
  if (s.n == 0) return BreathStats{};
  s.mean = sum / static_cast<double>(s.n);
  s.sd = std::sqrt(std::max(sum_sq / static_cast<double>(s.n) - s.mean * s.mean, 0.0));
  return s;
}

long count_code(const SimulationTrace& run, AlarmCode code) {
  return std::count_if(run.alarms.begin(), run.alarms.end(),
                       [code](const AlarmEvent& a) { return a.code == code; });
}

}  // namespace

std::string trace_csv(const std::vector<SimulationTrace>& runs) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "run,t_s,breath,phase,phi_rad,phi_ref_rad,voltage_V,current_A,"
                 "flow_true_mL_per_s,flow_measured_mL_per_s,p_aw_mbar,p_measured_mbar,"
                 "v_lung_mL,v_bag_mL\n");
  for (const auto& run : runs) {
    for (const auto& s : run.samples) {
      fmt::format_to(std::back_inserter(buf),
                     "{},{:.6f},{},{},{:.7f},{:.7f},{:.5f},{:.5f},{:.4f},{:.4f},{:.4f},{:.4f},"
                     "{:.4f},{:.4f}\n",
                     run.scenario_name, s.t, s.breath, s.inhale ? "inhale" : "exhale", s.phi,
                     s.phi_ref, s.voltage, s.current, s.flow_true, s.flow_measured, s.p_aw,
                     s.p_measured, s.v_lung, s.v_bag);
    }
  }
  return fmt::to_string(buf);
}

std::string breaths_csv(const std::vector<SimulationTrace>& runs) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "run,breath,t_start_s,t_end_s,phi_tgt_rad,v_ref_mL,v_tidal_mL,v_delivered_mL,"
                 "v_bag_expelled_mL,v_leak_mL,v_compression_mL,p_peak_mbar,p_end_exp_mbar,"
                 "peep_setting_mbar,inhale_samples,exhale_samples,clipped_samples,truncated,"
                 "setpoint_saturated,alarms\n");
  for (const auto& run : runs) {
    for (const auto& b : run.breaths) {
      fmt::format_to(std::back_inserter(buf),
                     "{},{},{:.6f},{:.6f},{:.7f},{:.3f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},"
                     "{:.4f},{:.3f},{},{},{},{},{},{}\n",
                     run.scenario_name, b.k, b.t_start, b.t_end, b.phi_tgt_used, b.v_ref,
                     b.v_tidal, b.v_delivered, b.v_bag_expelled, b.v_leak, b.v_compression,
                     b.p_peak, b.p_end_exp, b.peep_setting, b.inhale_samples, b.exhale_samples,
                     b.clipped_samples, b.truncated ? 1 : 0, b.adaptation_saturated ? 1 : 0,
                     alarm_codes(b));
    }
  }
  return fmt::to_string(buf);
}

std::string events_log(const std::vector<SimulationTrace>& runs) {
  fmt::memory_buffer buf;
  for (const auto& run : runs) {
    fmt::format_to(std::back_inserter(buf), "run={} flow_bias_pct={:.4f}\n", run.scenario_name,
                   run.flow_bias_pct);
    for (const auto& line : run.event_log) {
      fmt::format_to(std::back_inserter(buf), "run={} event {}\n", run.scenario_name, line);
    }
    for (const auto& a : run.alarms) {
      fmt::format_to(std::back_inserter(buf),
                     "run={} breath={} t={:.4f} alarm={} ({}) value={:.4f} threshold={:.4f}\n",
                     run.scenario_name, a.breath, a.time, static_cast<char>(a.code),
                     alarm_name(a.code), a.value, a.threshold);
    }
  }
  return fmt::to_string(buf);
}

std::string run_summary_csv(const std::vector<SimulationTrace>& runs, long warmup_breaths) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "run,breaths,warmup_breaths,v_tidal_mean_mL,v_tidal_sd_mL,v_tidal_min_mL,"
                 "v_tidal_max_mL,alarms_a,alarms_b,alarms_c,alarms_d,truncated_breaths,"
                 "flow_bias_pct\n");
  for (const auto& run : runs) {
    const auto s = tidal_stats(run, warmup_breaths);
    const long truncated = std::count_if(run.breaths.begin(), run.breaths.end(),
                                         [](const BreathRecord& b) { return b.truncated; });
    fmt::format_to(std::back_inserter(buf),
                   "{},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{},{},{},{:.4f}\n",
                   run.scenario_name, run.breaths.size(), warmup_breaths, s.mean, s.sd, s.min,
                   s.max, count_code(run, AlarmCode::kTidalVolumeLow),
                   count_code(run, AlarmCode::kMinuteVolumeLow),
                   count_code(run, AlarmCode::kInspiratoryPressureHigh),
                   count_code(run, AlarmCode::kInspiratoryPressureLow), truncated,
                   run.flow_bias_pct);
  }
  return fmt::to_string(buf);
}

std::string parameter_study_csv(const ParameterStudyResult& result) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "phi_tgt_rad");
  for (const auto& l : result.labels) fmt::format_to(std::back_inserter(buf), ",{}_mL", l);
  buf.push_back('\n');
  for (std::size_t i = 0; i < result.phi.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{:.2f}", result.phi[i]);
    for (double v : result.mean_volume[i]) fmt::format_to(std::back_inserter(buf), ",{:.2f}", v);
    buf.push_back('\n');
  }
  return fmt::to_string(buf);
}

std::string tracking_study_csv(const TrackingStudyResult& result) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "v_ref_mL,bpm,mean_error_mL,rms_error_mL,max_abs_error_mL,breaths,alarms\n");
  for (const auto& c : result.cells) {
    fmt::format_to(std::back_inserter(buf), "{:.0f},{},{:.4f},{:.4f},{:.4f},{},{}\n", c.v_ref,
                   c.bpm, c.mean_error, c.rms_error, c.max_abs_error, c.breaths, c.alarms);
  }
  return fmt::to_string(buf);
}

std::string transient_study_csv(const TransientStudyResult& result) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "relative_breath,breath,peep_setting_mbar,v_tidal_adaptive_mL,v_tidal_fixed_mL,"
                 "phi_tgt_adaptive_rad,phi_tgt_fixed_rad,p_end_exp_adaptive_mbar,"
                 "p_end_exp_fixed_mbar\n");
  for (const auto& r : result.rows) {
    fmt::format_to(std::back_inserter(buf), "{},{},{:.3f},{:.4f},{:.4f},{:.7f},{:.7f},{:.4f},{:.4f}\n",
                   r.relative_breath, r.breath, r.peep_setting, r.v_adaptive, r.v_fixed,
                   r.phi_adaptive, r.phi_fixed, r.p_end_exp_adaptive, r.p_end_exp_fixed);
  }
  return fmt::to_string(buf);
}

std::string parameter_study_table(const ParameterStudyResult& result) {
  std::string out = fmt::format("Tidal volume [mL], mean of {} breaths\n", result.averaged_breaths);
  out += fmt::format("{:>8}", "phi_tgt");
  for (const auto& l : result.labels) out += fmt::format(" {:>14}", l);
  out += '\n';
  for (std::size_t i = 0; i < result.phi.size(); ++i) {
    out += fmt::format("{:>8.2f}", result.phi[i]);
    for (double v : result.mean_volume[i]) out += fmt::format(" {:>14.1f}", v);
    out += '\n';
  }
  return out;
}

std::string tracking_study_table(const TrackingStudyResult& result) {
  std::string out = fmt::format("{:>8} {:>5} {:>10} {:>10} {:>10}\n", "v_ref", "bpm", "mean", "rms",
                                "max|e|");
  for (const auto& c : result.cells) {
    out += fmt::format("{:>8.0f} {:>5} {:>10.3f} {:>10.3f} {:>10.3f}\n", c.v_ref, c.bpm,
                       c.mean_error, c.rms_error, c.max_abs_error);
  }
  return out;
}

std::string transient_study_table(const TransientStudyResult& result) {
  std::string out = fmt::format("{:>6} {:>6} {:>12} {:>12}\n", "breath", "peep", "adaptive",
                                "fixed");
  for (const auto& r : result.rows) {
    out += fmt::format("{:>6} {:>6.0f} {:>12.1f} {:>12.1f}\n", r.relative_breath, r.peep_setting,
                       r.v_adaptive, r.v_fixed);
  }
  return out;
}

std::string run_summary_table(const std::vector<SimulationTrace>& runs, long warmup_breaths) {
  std::string out;
  for (const auto& run : runs) {
    const auto s = tidal_stats(run, warmup_breaths);
    out += fmt::format(
        "{}: {} breaths, tidal volume {:.2f} +- {:.2f} mL (min {:.2f}, max {:.2f}) after {} "
        "warm-up, alarms a={} b={} c={} d={}\n",
        run.scenario_name, run.breaths.size(), s.mean, s.sd, s.min, s.max, warmup_breaths,
        count_code(run, AlarmCode::kTidalVolumeLow), count_code(run, AlarmCode::kMinuteVolumeLow),
        count_code(run, AlarmCode::kInspiratoryPressureHigh),
        count_code(run, AlarmCode::kInspiratoryPressureLow));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace ventsim

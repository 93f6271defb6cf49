#include "ventsim/checks.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ventsim/adaptation.hpp"

namespace ventsim {

namespace {

bool has_code(const BreathRecord& b, AlarmCode code) {
  return std::any_of(b.alarms.begin(), b.alarms.end(),
                     [code](const AlarmEvent& a) { return a.code == code; });
}

}  // namespace

CheckResult check_lossless(const ParameterStudyResult& result, const BagGeometry& geometry,
                           double tolerance) {
  CheckResult r{"lossless conservation", true, ""};
  const std::size_t n_cases = result.labels.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < result.phi.size(); ++i) {
    const double geo = geometric_tidal_volume(geometry, result.phi[i]);
    for (std::size_t j = 0; j < n_cases; ++j) {
      for (const auto& b : result.runs[i * n_cases + j].breaths) {
        worst = std::max(worst, std::abs(b.v_tidal - geo));
      }
    }
  }
  r.passed = worst <= tolerance;
  r.detail = fmt::format("max |measured - geometric| = {:.4f} mL (tol {:.2f})", worst, tolerance);
  return r;
}

std::vector<CheckResult> check_parameter_study(const ParameterStudyResult& result,
                                               double min_separation,
                                               double disconnected_rel_tol) {
  const auto& v = result.mean_volume;
  const std::size_t n_phi = result.phi.size();
  const std::size_t n_cases = result.labels.size();

  CheckResult mono{"monotone in phi_tgt", true, ""};
  for (std::size_t j = 0; j < n_cases; ++j) {
    for (std::size_t i = 1; i < n_phi; ++i) {
      if (!(v[i][j] > v[i - 1][j])) {
        mono.passed = false;
        mono.detail += fmt::format("{} not increasing at phi={:.2f}; ", result.labels[j],
                                   result.phi[i]);
      }
    }
  }
  if (mono.passed) mono.detail = "all columns strictly increasing";

  CheckResult order{"case ordering", true, ""};
  CheckResult sep{"case separation", true, ""};
  double min_gap = 1e300;
  for (std::size_t i = 0; i < n_phi; ++i) {
    for (std::size_t j = 1; j < n_cases; ++j) {
      const double gap = v[i][j - 1] - v[i][j];
      min_gap = std::min(min_gap, gap);
      if (!(gap > 0.0)) {
        order.passed = false;
        order.detail += fmt::format("{} !> {} at phi={:.2f}; ", result.labels[j - 1],
                                    result.labels[j], result.phi[i]);
      }
    }
  }
  if (order.passed) order.detail = "each row ordered left to right";
  sep.passed = min_gap > min_separation;
  sep.detail = fmt::format("smallest adjacent gap {:.2f} mL (need > {:.0f})", min_gap,
                           min_separation);

  CheckResult disc{"disconnected column vs reference", true, ""};
  const auto measured = reference_parameter_grid().cases.front();
  double worst = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < n_phi; ++i) {
    for (std::size_t p = 0; p < measured.phi.size(); ++p) {
      if (std::abs(measured.phi[p] - result.phi[i]) < 1e-9) {
        worst = std::max(worst, std::abs(v[i][0] - measured.volume[p]) / measured.volume[p]);
        ++matched;
      }
    }
  }
  disc.passed = matched == measured.phi.size() && worst <= disconnected_rel_tol;
  disc.detail = fmt::format("worst relative error {:.2f}% over {} set-points (tol {:.0f}%)",
                            worst * 100.0, matched, disconnected_rel_tol * 100.0);
  return {mono, order, sep, disc};
}

CheckResult check_tracking_study(const TrackingStudyResult& result) {
  CheckResult r{"tracking statistics", !result.cells.empty(), ""};
  double worst_mean = 0.0;
  double worst_rms = 0.0;
  double worst_max = 0.0;
  for (const auto& c : result.cells) {
    worst_mean = std::max(worst_mean, std::abs(c.mean_error));
    worst_rms = std::max(worst_rms, c.rms_error);
    worst_max = std::max(worst_max, c.max_abs_error);
  }
  r.passed = r.passed && worst_mean <= 0.5 && worst_rms <= 1.5 && worst_max <= 4.0;
  r.detail = fmt::format("{} cells: worst |mean| {:.3f}, RMS {:.3f}, max {:.3f} mL", result.cells.size(),
                         worst_mean, worst_rms, worst_max);
  return r;
}

std::vector<CheckResult> check_transient_study(const TransientStudyResult& result, double v_ref) {
  CheckResult adapt{"adaptive recovery", true, ""};
  CheckResult fixed{"fixed set-point deficit", true, ""};
  CheckResult peep{"end-expiratory pressure shift", true, ""};
  double worst_adapt = 0.0;
  double max_fixed = -1e300;
  for (const auto& r : result.rows) {
    if (r.relative_breath >= 3) worst_adapt = std::max(worst_adapt, std::abs(r.v_adaptive - v_ref));
    if (r.relative_breath >= 0) max_fixed = std::max(max_fixed, r.v_fixed);
  }
  adapt.passed = worst_adapt <= 10.0;
  adapt.detail = fmt::format("max |V - {:.0f}| from breath 3 on: {:.2f} mL", v_ref, worst_adapt);
  fixed.passed = max_fixed < v_ref - 5.0;
  fixed.detail = fmt::format("largest post-step volume {:.2f} mL (need < {:.0f})", max_fixed,
                             v_ref - 5.0);

  // Group breaths by the PEEP setting active during their exhalation.
  const double peep_before = result.rows.front().peep_setting;
  const double peep_after = result.rows.back().peep_setting;
  double sum_b = 0.0;
  double sum_a = 0.0;
  long n_b = 0;
  long n_a = 0;
  for (const auto& r : result.rows) {
    if (r.peep_setting == peep_before) {
      sum_b += r.p_end_exp_adaptive + r.p_end_exp_fixed;
      n_b += 2;
    } else if (r.peep_setting == peep_after) {
      sum_a += r.p_end_exp_adaptive + r.p_end_exp_fixed;
      n_a += 2;
    }
  }
  const double shift = (n_a && n_b) ? sum_a / n_a - sum_b / n_b : 0.0;
  peep.passed = n_a > 0 && n_b > 0 && std::abs(shift - 5.0) <= 1.0;
  peep.detail = fmt::format("mean end-expiratory pressure shift {:.3f} mBar", shift);
  return {adapt, fixed, peep};
}

CheckResult check_repeatability(const SimulationTrace& run, long warmup_breaths) {
  CheckResult r{"tidal volume repeatability", false, ""};
  std::vector<double> v;
  for (std::size_t k = static_cast<std::size_t>(warmup_breaths); k < run.breaths.size(); ++k) {
    v.push_back(run.breaths[k].v_tidal);
  }
  if (v.empty()) {
    r.detail = "no breaths after warm-up";
    return r;
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  double max_dev = 0.0;
  for (double x : v) {
    ss += (x - mean) * (x - mean);
    max_dev = std::max(max_dev, std::abs(x - mean));
  }
  const double rms = std::sqrt(ss / static_cast<double>(v.size()));
  r.passed = rms <= 0.002 * mean && max_dev <= 2.5;
  r.detail = fmt::format("{} breaths, mean {:.2f} mL, RMS {:.3f} mL ({:.3f}%), max dev {:.3f} mL",
                         v.size(), mean, rms, rms / mean * 100.0, max_dev);
  return r;
}

CheckResult check_disconnection_alarm(const SimulationTrace& run) {
  const long hits = std::count_if(run.breaths.begin(), run.breaths.end(), [](const BreathRecord& b) {
    return has_code(b, AlarmCode::kInspiratoryPressureLow);
  });
  CheckResult r{"disconnection alarm", !run.breaths.empty() &&
                                           hits == static_cast<long>(run.breaths.size()),
                ""};
  r.detail = fmt::format("alarm (d) in {} of {} breaths", hits, run.breaths.size());
  return r;
}

CheckResult check_overdrive(const SimulationTrace& run, const AlarmThresholds& thresholds) {
  CheckResult r{"overpressure truncation", true, ""};
  long fired = 0;
  long untruncated = 0;
  for (const auto& b : run.breaths) {
    if (has_code(b, AlarmCode::kInspiratoryPressureHigh)) {
      ++fired;
      if (!b.truncated) ++untruncated;
    }
  }
  double slew = 0.0;
  double p_max_seen = 0.0;
  for (std::size_t i = 1; i < run.samples.size(); ++i) {
    const auto& s = run.samples[i];
    p_max_seen = std::max(p_max_seen, s.p_measured);
    if (s.inhale && s.p_measured <= thresholds.p_insp_max) {
      slew = std::max(slew, s.p_measured - run.samples[i - 1].p_measured);
    }
  }
  const double bound = thresholds.p_insp_max + slew;
  r.passed = fired > 0 && untruncated == 0 && !run.samples.empty() && p_max_seen <= bound;
  r.detail = fmt::format(
      "alarm (c) in {} breaths ({} not truncated), peak sample {:.3f} mBar, bound {:.3f} mBar",
      fired, untruncated, p_max_seen, bound);
  return r;
}

CheckResult check_no_alarms(const SimulationTrace& run) {
  CheckResult r{"no alarms", run.alarms.empty(), ""};
  r.detail = fmt::format("{} alarms over {} breaths", run.alarms.size(), run.breaths.size());
  return r;
}

CheckResult check_minute_volume_alarm(const Scenario& scenario, const SimulationTrace& run,
                                      long clear_breaths) {
  CheckResult r{"minute volume alarm", false, ""};
  long step_down = -1;
  long restore = -1;
  double v_prev = scenario.settings.v_ref;
  for (const auto& e : scenario.events) {
    if (const auto* c = std::get_if<VRefChange>(&e.change)) {
      if (c->v_ref < v_prev && step_down < 0) step_down = e.breath;
      if (c->v_ref > v_prev && step_down >= 0 && restore < 0) restore = e.breath;
      v_prev = c->v_ref;
    }
  }
  if (step_down < 0 || restore < 0) {
    r.detail = "scenario needs a v_ref step down followed by a restore";
    return r;
  }
  const long n = static_cast<long>(run.breaths.size());
  long before = 0;
  long during = 0;
  long tail = 0;
  for (long k = 0; k < n; ++k) {
    if (!has_code(run.breaths[static_cast<std::size_t>(k)], AlarmCode::kMinuteVolumeLow)) continue;
    if (k < step_down) ++before;
    if (k >= step_down && k < restore) ++during;
    if (k >= n - clear_breaths) ++tail;
  }
  r.passed = before == 0 && during > 0 && tail == 0 && n - clear_breaths > restore;
  r.detail = fmt::format("alarm (b): {} before step, {} while stepped down, {} in final {} breaths",
                         before, during, tail, clear_breaths);
  return r;
}

}  // namespace ventsim

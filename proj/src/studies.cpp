#include "ventsim/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "ventsim/errors.hpp"

namespace ventsim {

std::vector<SimulationTrace> run_batch(const std::vector<Scenario>& scenarios, unsigned threads) {
  std::vector<SimulationTrace> results(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(scenarios.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        results[i] = run_scenario(scenarios[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // First failure in input order, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<ParameterCase> default_parameter_cases() {
  return {
      {"disconnected", patient_preset("disconnected"), 5.0},
      {"healthy_peep5", patient_preset("healthy"), 5.0},
      {"ards_peep5", patient_preset("ards"), 5.0},
      {"ards_peep10", patient_preset("ards"), 10.0},
  };
}

std::vector<double> default_phi_grid() {
  return {0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
}

ParameterStudyResult run_parameter_study(const Scenario& base, const std::vector<double>& phi_grid,
                                         const std::vector<ParameterCase>& cases,
                                         long averaged_breaths, unsigned threads) {
  if (phi_grid.empty() || cases.empty()) {
    throw ConfigError("parameter study: phi grid and case list must be nonempty");
  }
  if (averaged_breaths < 1) throw ConfigError("parameter study: averaged_breaths must be >= 1");
  std::vector<Scenario> runs;
  for (double phi : phi_grid) {
    for (const auto& c : cases) {
      Scenario s = base;
      s.name = base.name + "/" + c.label;
      s.patient = c.patient;
      s.settings.peep = c.peep;
      s.adaptation.enabled = false;
      s.adaptation.phi_tgt = phi;
      s.n_breaths = base.warmup_breaths + averaged_breaths;
      s.events.clear();
      s.record_trace = false;
      runs.push_back(std::move(s));
    }
  }
  auto traces = run_batch(runs, threads);

  ParameterStudyResult out;
  out.phi = phi_grid;
  out.averaged_breaths = averaged_breaths;
  for (const auto& c : cases) out.labels.push_back(c.label);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < cases.size(); ++j, ++idx) {
      const auto& breaths = traces[idx].breaths;
      double sum = 0.0;
      for (long k = base.warmup_breaths; k < base.warmup_breaths + averaged_breaths; ++k) {
        sum += breaths[static_cast<std::size_t>(k)].v_tidal;
      }
      row.push_back(sum / static_cast<double>(averaged_breaths));
    }
    out.mean_volume.push_back(std::move(row));
  }
  out.runs = std::move(traces);
  return out;
}

TrackingStudyResult run_tracking_study(const Scenario& base, const std::vector<double>& v_refs,
                                       const std::vector<int>& bpms, long measured_breaths,
                                       unsigned threads) {
  if (v_refs.empty() || bpms.empty()) throw ConfigError("tracking study: empty grid");
  if (measured_breaths < 1) throw ConfigError("tracking study: measured_breaths must be >= 1");
  std::vector<Scenario> runs;
  for (double v : v_refs) {
    for (int bpm : bpms) {
      Scenario s = base;
      s.name = base.name + "/" + std::to_string(static_cast<int>(v)) + "mL_" +
               std::to_string(bpm) + "bpm";
      s.settings.v_ref = v;
      s.settings.bpm = bpm;
      s.adaptation.enabled = true;
      s.n_breaths = base.warmup_breaths + measured_breaths;
      s.events.clear();
      s.thresholds.reset();
      s.record_trace = false;
      runs.push_back(std::move(s));
    }
  }
  auto traces = run_batch(runs, threads);

  std::vector<TrackingCell> cells;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    TrackingCell c;
    c.v_ref = runs[i].settings.v_ref;
    c.bpm = runs[i].settings.bpm;
    c.breaths = measured_breaths;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long k = base.warmup_breaths; k < runs[i].n_breaths; ++k) {
      const auto& b = traces[i].breaths[static_cast<std::size_t>(k)];
      const double e = b.v_tidal - c.v_ref;
      sum += e;
      sum_sq += e * e;
      c.max_abs_error = std::max(c.max_abs_error, std::abs(e));
      c.alarms += static_cast<long>(b.alarms.size());
    }
    c.mean_error = sum / static_cast<double>(measured_breaths);
    c.rms_error = std::sqrt(sum_sq / static_cast<double>(measured_breaths));
    cells.push_back(c);
  }
  return TrackingStudyResult{std::move(cells), std::move(traces)};
}

TransientStudyResult run_transient_study(const Scenario& base, long before, long after) {
  const auto it = std::find_if(base.events.begin(), base.events.end(), [](const ScenarioEvent& e) {
    return std::holds_alternative<PeepChange>(e.change);
  });
  if (it == base.events.end()) throw ConfigError("transient study: scenario has no peep event");
  TransientStudyResult out;
  out.event_breath = it->breath;
  if (out.event_breath - before < 1) {
    throw ConfigError("transient study: not enough breaths before the peep event");
  }
  if (base.n_breaths < out.event_breath + after + 1) {
    throw ConfigError("transient study: n_breaths too small for the requested window");
  }

  Scenario adaptive = base;
  adaptive.name = base.name + "/adaptive";
  adaptive.adaptation.enabled = true;
  out.adaptive = run_scenario(adaptive);

  Scenario fixed = base;
  fixed.name = base.name + "/fixed";
  fixed.adaptation.enabled = false;
  fixed.adaptation.phi_tgt =
      out.adaptive.breaths[static_cast<std::size_t>(out.event_breath - 1)].phi_tgt_used;
  out.fixed = run_scenario(fixed);

  for (long k = out.event_breath - before; k <= out.event_breath + after; ++k) {
    const auto& a = out.adaptive.breaths[static_cast<std::size_t>(k)];
    const auto& f = out.fixed.breaths[static_cast<std::size_t>(k)];
    out.rows.push_back(TransientRow{k - out.event_breath, k, a.v_tidal, f.v_tidal, a.phi_tgt_used,
                                    f.phi_tgt_used, a.p_end_exp, f.p_end_exp, a.peep_setting});
  }
  return out;
}

}  // namespace ventsim

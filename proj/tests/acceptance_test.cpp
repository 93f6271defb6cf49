// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any miss.

#include <fmt/core.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "random_plants.hpp"
#include "ventsim/adaptation.hpp"
#include "ventsim/bag_model.hpp"
#include "ventsim/checks.hpp"
#include "ventsim/runner.hpp"
#include "ventsim/scenario_io.hpp"
#include "ventsim/sim_engine.hpp"
#include "ventsim/units.hpp"

namespace fs = std::filesystem;
using namespace ventsim;

namespace {

const fs::path kScenarios = fs::path(VENTSIM_SOURCE_DIR) / "scenarios";

struct Verdict {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& note) {
    passed = passed && ok;
    notes.push_back(fmt::format("{}{}", ok ? "" : "MISS ", note));
  }
  void add(const CheckResult& r) { require(r.passed, r.name + ": " + r.detail); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct ScenarioRun {
  ScenarioFile file;
  RunOutputs outputs;
  double seconds = 0.0;
};

std::map<std::string, ScenarioRun> g_runs;

const ScenarioRun& scenario_run(const std::string& name) {
  auto it = g_runs.find(name);
  if (it != g_runs.end()) return it->second;
  ScenarioRun run;
  run.file = load_scenario_file(kScenarios / (name + ".scenario"));
  const auto t0 = std::chrono::steady_clock::now();
  run.outputs = execute(run.file, true);
  run.seconds = seconds_since(t0);
  return g_runs.emplace(name, std::move(run)).first->second;
}

void add_checks(Verdict& v, const std::string& name) {
  const auto& run = scenario_run(name);
  for (const auto& c : run.outputs.checks) v.add(c);
}

Verdict criterion_1() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  const double dv = 1760.0;
  const SetpointLimits limits;
  int converged = 0;
  long worst_breaths = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto plant = testing::make_random_plant(rng, dv, limits);
    const double lo = plant(limits.phi_min);
    const double hi = plant(limits.phi_max);
    const double v_ref = lo + (hi - lo) * (0.02 + 0.96 * rng.uniform());
    const AdaptationState s0{limits.phi_min + (limits.phi_max - limits.phi_min) * rng.uniform(),
                             1.0 / dv, 0, true};
    const auto r = verify_convergence(plant, v_ref, s0, 200, limits, 1e-6, 2000);
    if (r.verdict == ConvergenceVerdict::kConverged && r.monotone && r.converged) {
      ++converged;
      worst_breaths = std::max(worst_breaths, r.breaths_to_tolerance);
    }
  }
  v.require(converged == 1000,
            fmt::format("{}/1000 random plants monotone and within 1e-6 rad (worst {} breaths)",
                        converged, worst_breaths));

  const TidalVolumePlant steepest = [dv](double phi) { return 50.0 + dv * phi; };
  const auto trace = adaptation_trace(steepest, steepest(0.25), {0.1, 2.0 / dv, 0, true}, 20, limits);
  v.require(!is_monotone_approach(trace, 0.25) && trace[1] > 0.25,
            fmt::format("gain 2/dV overshoots (phi after one step {:.4f} > 0.25)", trace[1]));
  const double t = seconds_since(t0);
  v.require(t <= 10.0, fmt::format("runtime {:.2f} s (limit 10)", t));
  return v;
}

Verdict criterion_2() {
  Verdict v;
  const double dv = estimate_sensitivity(reference_parameter_grid());
  v.require(dv == 1760.0, fmt::format("dV = {} mL/rad", dv));
  const double g = gain_from_sensitivity(dv, true);
  v.require(g == 5e-4, fmt::format("rounded gain = {} rad/mL", g));
  return v;
}

Verdict criterion_3() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  v.require(chord_deficit(1.0) == 0.0 && chord_deficit(0.0) == units::kPi / 2.0,
            "chord deficit endpoints 0 and pi/2");

  const BagGeometry g;
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double phi = 0.01 + (g.phi_max_rad - 0.02) * i / 99.0;
    for (int j = 0; j < 10; ++j) {
      const double phi_dot = -2.0 + 4.0 * j / 9.0 + 0.05;
      const double numeric = (bag_volume(g, phi + h) - bag_volume(g, phi - h)) / (2.0 * h) * phi_dot;
      const double analytic = bag_flow_rate(g, phi, phi_dot);
      worst = std::max(worst, std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-12));
    }
  }
  v.require(worst <= 1e-6, fmt::format("flow rate vs central difference: worst relative {:.2e}", worst));

  const double v_full = g.l_ambu_mm * g.r_ambu_mm * g.r_ambu_mm * units::kPi * 1e-3;
  bool bounded = true;
  for (int i = 0; i <= 1000; ++i) {
    const double vol = bag_volume(g, g.full_stroke_rad() * i / 1000.0);
    bounded = bounded && vol >= 0.0 && vol <= v_full + 1e-9;
  }
  bool rejects = false;
  try {
    bag_volume(g, g.full_stroke_rad() * 1.01);
  } catch (const std::domain_error&) {
    rejects = true;
  }
  v.require(bounded && rejects && bag_volume(g, 0.0) == v_full,
            fmt::format("bag volume within [0, {:.1f}] mL over the stroke, rejects beyond", v_full));
  const double t = seconds_since(t0);
  v.require(t <= 1.0, fmt::format("runtime {:.3f} s (limit 1)", t));
  return v;
}

Verdict criterion_4() {
  Verdict v;
  const auto& run = scenario_run("lossless");
  v.require(run.file.study.phi_grid == default_phi_grid(), "set-points 0.20 to 0.50 step 0.05");
  add_checks(v, "lossless");
  return v;
}

Verdict criterion_5() {
  Verdict v;
  add_checks(v, "parameter_study");
  const double t = scenario_run("parameter_study").seconds;
  v.require(t <= 60.0, fmt::format("runtime {:.2f} s (limit 60)", t));
  return v;
}

Verdict criterion_6() {
  Verdict v;
  const auto& run = scenario_run("tracking");
  v.require(run.file.study.v_refs.size() * run.file.study.bpms.size() == 9 &&
                run.file.study.measured_breaths == 100,
            "9 cells, 100 measured breaths each");
  add_checks(v, "tracking");
  v.require(run.seconds <= 120.0, fmt::format("runtime {:.2f} s (limit 120)", run.seconds));
  return v;
}

Verdict criterion_7() {
  Verdict v;
  add_checks(v, "peep_step");
  return v;
}

Verdict criterion_8() {
  Verdict v;
  const auto& run = scenario_run("repeatability");
  const auto& s = run.file.scenario;
  v.require(!s.adaptation.enabled && s.n_breaths - s.warmup_breaths >= 100,
            fmt::format("fixed set-point, {} measured breaths", s.n_breaths - s.warmup_breaths));
  add_checks(v, "repeatability");
  return v;
}

Verdict criterion_9() {
  Verdict v;
  const std::vector<std::pair<int, int>> ratios = {{1, 1}, {2, 3}, {1, 2}, {2, 5}, {1, 3}};
  int cells = 0;
  int exact = 0;
  for (int bpm = 10; bpm <= 30; bpm += 2) {
    for (auto [i, e] : ratios) {
      Scenario s;
      s.settings.bpm = bpm;
      s.settings.inspiratory = i;
      s.settings.expiratory = e;
      s.n_breaths = 2;
      s.thresholds.reset();
      const auto tr = run_scenario(s);
      ++cells;
      bool ok = tr.breaths.size() == 2;
      for (const auto& b : tr.breaths) {
        const long n = b.inhale_samples + b.exhale_samples;
        ok = ok && std::abs(60.0 / (b.t_end - b.t_start) - bpm) <= 1e-9 &&
             b.inhale_samples * (i + e) == n * i;
      }
      // The trace agrees with the per-breath counts.
      long inhale = 0;
      for (const auto& smp : tr.samples) inhale += smp.inhale ? 1 : 0;
      ok = ok && inhale == tr.breaths[0].inhale_samples + tr.breaths[1].inhale_samples &&
           static_cast<long>(tr.samples.size()) ==
               tr.breaths[0].inhale_samples + tr.breaths[0].exhale_samples +
                   tr.breaths[1].inhale_samples + tr.breaths[1].exhale_samples;
      exact += ok ? 1 : 0;
    }
  }
  v.require(exact == cells, fmt::format("realized BPM and I:E exact in {}/{} settings", exact, cells));

  std::vector<double> peeps;
  for (int p = 0; p <= 25; ++p) {
    VentSettings s;
    s.peep = p;
    if (validate_settings(s).empty()) peeps.push_back(p);
  }
  std::vector<int> bpms;
  for (int b = 6; b <= 34; ++b) {
    VentSettings s;
    s.bpm = b;
    if (validate_settings(s).empty()) bpms.push_back(b);
  }
  std::vector<int> expiratory;
  for (int e = 0; e <= 5; ++e) {
    VentSettings s;
    s.inspiratory = 1;
    s.expiratory = e;
    if (validate_settings(s).empty()) expiratory.push_back(e);
  }
  v.require(peeps == std::vector<double>{5, 10, 15, 20}, "PEEP accepted only at 5, 10, 15, 20 mBar");
  v.require(bpms == std::vector<int>{10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30},
            "BPM accepted only at 10 to 30 step 2");
  v.require(expiratory == std::vector<int>{1, 2, 3}, "I:E accepted only for 1:1 to 1:3");
  return v;
}

Verdict criterion_10() {
  Verdict v;
  for (const char* name : {"disconnected", "overdrive", "nominal", "minute_volume"}) {
    add_checks(v, name);
  }
  v.require(scenario_run("nominal").file.scenario.n_breaths >= 100, "nominal run covers 100 breaths");
  const auto& mv = scenario_run("minute_volume").file.scenario;
  double lowest = mv.settings.v_ref;
  for (const auto& ev : mv.events) {
    if (const auto* c = std::get_if<VRefChange>(&ev.change)) lowest = std::min(lowest, c->v_ref);
  }
  v.require(std::abs(lowest / mv.settings.v_ref - 0.7) < 1e-9,
            fmt::format("v_ref stepped down by {:.0f}%", 100.0 * (1.0 - lowest / mv.settings.v_ref)));
  return v;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion_11() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / fmt::format("ventsim-acceptance-{}", ::getpid());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() == ".scenario") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int identical = 0;
  for (const auto& path : files) {
    const auto file = load_scenario_file(path);
    const auto name = path.stem().string();
    std::vector<fs::path> a;
    std::vector<fs::path> b;
    a = write_outputs(root / "a" / name, file, execute(file, false));
    b = write_outputs(root / "b" / name, file, execute(file, false));
    bool same = a.size() == b.size() && !a.empty();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].filename() == b[i].filename() && read_bytes(a[i]) == read_bytes(b[i]);
    }
    if (same) {
      ++identical;
    } else {
      v.require(false, name + " outputs differ between runs");
    }
  }
  fs::remove_all(root);
  v.require(identical == static_cast<int>(files.size()) && !files.empty(),
            fmt::format("{}/{} bundled scenarios byte-identical over two runs", identical, files.size()));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.require(false, fmt::format("exception: {}", e.what()));
    }
    failed += v.passed ? 0 : 1;
    std::string detail;
    for (const auto& n : v.notes) detail += (detail.empty() ? "" : "; ") + n;
    fmt::print("criterion {}: {} {}\n", i + 1, v.passed ? "PASS" : "FAIL", detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#include "ventsim/runner.hpp"

#include <fmt/format.h>

#include "ventsim/errors.hpp"
#include "ventsim/output.hpp"

namespace ventsim {

RunOutputs execute(const ScenarioFile& file, bool want_checks) {
  const Scenario& sc = file.scenario;
  const StudySpec& st = file.study;
  RunOutputs out;
  auto add = [&](CheckResult r) { out.checks.push_back(std::move(r)); };
  auto add_all = [&](std::vector<CheckResult> rs) {
    for (auto& r : rs) add(std::move(r));
  };

  switch (st.kind) {
    case StudyKind::kParameterStudy: {
      auto res = run_parameter_study(sc, st.phi_grid, st.cases, st.averaged_breaths);
      out.summary_csv = parameter_study_csv(res);
      out.table = parameter_study_table(res);
      if (want_checks) {
        if (file.check == CheckKind::kLossless) {
          add(check_lossless(res, sc.geometry));
        } else if (file.check == CheckKind::kStudy || file.check == CheckKind::kNone) {
          add_all(check_parameter_study(res));
        }
      }
      out.runs = std::move(res.runs);
      break;
    }
    case StudyKind::kTrackingStudy: {
      auto res = run_tracking_study(sc, st.v_refs, st.bpms, st.measured_breaths);
      out.summary_csv = tracking_study_csv(res);
      out.table = tracking_study_table(res);
      if (want_checks) add(check_tracking_study(res));
      out.runs = std::move(res.runs);
      break;
    }
    case StudyKind::kTransientStudy: {
      auto res = run_transient_study(sc, st.breaths_before, st.breaths_after);
      out.summary_csv = transient_study_csv(res);
      out.table = transient_study_table(res);
      if (want_checks) add_all(check_transient_study(res, sc.settings.v_ref));
      out.runs.push_back(std::move(res.adaptive));
      out.runs.push_back(std::move(res.fixed));
      break;
    }
    case StudyKind::kSingle: {
      out.runs.push_back(run_scenario(sc));
      const auto& run = out.runs.front();
      out.summary_csv = run_summary_csv(out.runs, sc.warmup_breaths);
      out.table = run_summary_table(out.runs, sc.warmup_breaths);
      if (!want_checks) break;
      switch (file.check) {
        case CheckKind::kRepeatability: add(check_repeatability(run, sc.warmup_breaths)); break;
        case CheckKind::kDisconnection: add(check_disconnection_alarm(run)); break;
        case CheckKind::kOverdrive: add(check_overdrive(run, sc.resolved_thresholds())); break;
        case CheckKind::kNominal: add(check_no_alarms(run)); break;
        case CheckKind::kMinuteVolume: add(check_minute_volume_alarm(sc, run)); break;
        default: break;
      }
      break;
    }
  }
  if (want_checks && out.checks.empty()) {
    throw ConfigError(fmt::format("no check defined for study '{}' with check kind '{}'",
                                           to_string(st.kind), to_string(file.check)));
  }
  return out;
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir,
                                                 const ScenarioFile& file,
                                                 const RunOutputs& outputs) {
  std::filesystem::create_directories(dir);
  const std::vector<std::filesystem::path> paths = {dir / "trace.csv", dir / "breaths.csv",
                                                    dir / "summary.csv", dir / "events.log",
                                                    dir / "scenario.resolved"};
  write_text_file(paths[0], trace_csv(outputs.runs));
  write_text_file(paths[1], breaths_csv(outputs.runs));
  write_text_file(paths[2], outputs.summary_csv);
  write_text_file(paths[3], events_log(outputs.runs));
  write_text_file(paths[4], format_scenario(file));
  return paths;
}

}  // namespace ventsim

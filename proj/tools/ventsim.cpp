// Command-line front end: run a scenario file or one of the batch studies and
// write trace.csv, breaths.csv, summary.csv and events.log.

#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ventsim/errors.hpp"
#include "ventsim/runner.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kConfigError = 2,
  kInvariantViolation = 3,
  kCheckFailed = 4,
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop simulator of a bag-squeezing ventilator"};
  std::string scenario_path;
  std::string study_name;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool check = false;
  bool quiet = false;
  app.add_option("--scenario", scenario_path, "Scenario file")->required();
  app.add_option("--study", study_name,
                 "single | parameter-study | tracking-study | transient-study "
                 "(default: the scenario's [study] kind)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Override the scenario seed");
  app.add_flag("--check", check, "Evaluate the scenario's expectations; exit 4 on a miss");
  app.add_flag("--quiet", quiet, "Only print errors and check failures");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  ventsim::ScenarioFile file;
  try {
    file = ventsim::load_scenario_file(scenario_path);
    if (!study_name.empty()) file.study.kind = ventsim::parse_study_kind(study_name);
    if (seed) file.scenario.seed = *seed;
    const auto violations = ventsim::validate_settings(file.scenario.settings);
    if (!violations.empty()) {
      for (const auto& v : violations) fmt::print(stderr, "{}: settings: {}\n", scenario_path, v);
      return kConfigError;
    }
  } catch (const ventsim::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  }

  ventsim::RunOutputs out;
  try {
    out = ventsim::execute(file, check);
  } catch (const ventsim::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const ventsim::InvariantViolation& e) {
    fmt::print(stderr, "invariant violation: {}\n", e.what());
    return kInvariantViolation;
  }

  try {
    ventsim::write_outputs(out_dir, file, out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "output error: {}\n", e.what());
    return kIoError;
  }

  if (!quiet) fmt::print("{}", out.table);
  bool all_passed = true;
  for (const auto& c : out.checks) {
    all_passed = all_passed && c.passed;
    if (!quiet || !c.passed) {
      fmt::print("{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    }
  }
  return all_passed ? kOk : kCheckFailed;
}

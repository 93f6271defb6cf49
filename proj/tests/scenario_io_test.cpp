#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ventsim/errors.hpp"
#include "ventsim/scenario_io.hpp"

namespace ventsim {
namespace {

const std::filesystem::path kSource = VENTSIM_SOURCE_DIR;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Expects a ConfigError whose message contains `needle`.
void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    parse_scenario(text, "t.scenario");
    FAIL() << "no error for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(ValidateSettings, DefaultsAdmissible) { EXPECT_TRUE(validate_settings(VentSettings{}).empty()); }

TEST(ValidateSettings, PeepNotMultipleOfFive) {
  VentSettings s;
  s.peep = 7;
  const auto v = validate_settings(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("PEEP must be multiple of 5 in [5,20]"), std::string::npos);
}

TEST(ValidateSettings, OddBpmRejected) {
  VentSettings s;
  s.bpm = 11;
  EXPECT_EQ(validate_settings(s).size(), 1u);
  s.bpm = 32;
  EXPECT_EQ(validate_settings(s).size(), 1u);
  s.bpm = 30;
  EXPECT_TRUE(validate_settings(s).empty());
}

TEST(ValidateSettings, RatioAndVolumeBounds) {
  VentSettings s;
  s.inspiratory = 1;
  s.expiratory = 4;
  EXPECT_EQ(validate_settings(s).size(), 1u);
  s.expiratory = 3;
  EXPECT_TRUE(validate_settings(s).empty());
  s.inspiratory = 2;
  s.expiratory = 1;
  EXPECT_EQ(validate_settings(s).size(), 1u);
  s = VentSettings{};
  s.v_ref = 500;
  EXPECT_EQ(validate_settings(s).size(), 1u);
}

TEST(ValidateSettings, ReportsEveryViolation) {
  VentSettings s;
  s.peep = 25;
  s.bpm = 9;
  s.v_ref = 300;
  EXPECT_EQ(validate_settings(s).size(), 3u);
}

TEST(ParseScenario, MinimalFileUsesDefaults) {
  const auto f = parse_scenario("schema = ventsim-scenario/1\n");
  EXPECT_EQ(f.scenario.settings.bpm, 20);
  EXPECT_EQ(f.study.kind, StudyKind::kSingle);
  EXPECT_EQ(f.check, CheckKind::kNone);
  ASSERT_TRUE(f.scenario.thresholds.has_value());
}

TEST(ParseScenario, ErrorsCarryLineNumbers) {
  const std::string head = "schema = ventsim-scenario/1\n[settings]\n";
  expect_config_error(head + "bpm = abc\n", "t.scenario:3: [settings] bpm: expected an integer");
  expect_config_error(head + "bmp = 20\n", "t.scenario:3: unknown key 'bmp'");
  expect_config_error(head + "bpm = 20\nbpm = 22\n", "t.scenario:4: duplicate key 'bpm'");
  expect_config_error(head + "[lungs]\n", "t.scenario:3: unknown section [lungs]");
  expect_config_error(head + "ie = 1-2\n", "t.scenario:3:");
  expect_config_error("schema = ventsim-scenario/9\n", "t.scenario:1: unsupported schema");
  expect_config_error("[settings]\nbpm = 20\n", "missing 'schema");
  expect_config_error(head + "[events]\nevent = 3 peep_mbar\n", "t.scenario:4:");
  expect_config_error(head + "[events]\nevent = 3 weather 10\n", "t.scenario:4:");
}

TEST(ParseScenario, EventsSortedByBreath) {
  const auto f = parse_scenario(
      "schema = ventsim-scenario/1\n[run]\nn_breaths = 20\n[events]\n"
      "event = 12 peep_mbar 10\nevent = 4 patient ards\nevent = 12 bpm 16\n");
  ASSERT_EQ(f.scenario.events.size(), 3u);
  EXPECT_EQ(f.scenario.events[0].breath, 4);
  EXPECT_TRUE(std::holds_alternative<PeepChange>(f.scenario.events[1].change));
  EXPECT_TRUE(std::holds_alternative<BpmChange>(f.scenario.events[2].change));
}

TEST(ParseScenario, ExplicitValuesOverridePreset) {
  const auto f = parse_scenario(
      "schema = ventsim-scenario/1\n[patient]\nr_aw_mbar_s_per_L = 12\npreset = ards\n");
  EXPECT_EQ(f.scenario.patient.label, patient_preset("ards").label);
  EXPECT_DOUBLE_EQ(f.scenario.patient.lung.r_aw, 12.0);
}

TEST(FormatScenario, RoundTripIsStable) {
  ScenarioFile f;
  f.scenario.name = "round";
  f.scenario.settings.bpm = 16;
  f.scenario.settings.peep = 10;
  f.scenario.patient = patient_preset("ards");
  f.scenario.events.push_back({3, PeepChange{15.0}});
  f.scenario.events.push_back({5, AdaptationToggle{false}});
  f.study.kind = StudyKind::kTrackingStudy;
  f.check = CheckKind::kStudy;
  const auto text = format_scenario(f);
  const auto back = parse_scenario(text);
  EXPECT_EQ(format_scenario(back), text);
  EXPECT_EQ(back.scenario.settings.bpm, 16);
  EXPECT_EQ(back.scenario.events.size(), 2u);
}

TEST(FormatScenario, DefaultsFileIsCanonical) {
  EXPECT_EQ(read_file(kSource / "config" / "defaults.scenario"), format_scenario(ScenarioFile{}));
}

TEST(BundledScenarios, ParseAndAdmissible) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kSource / "scenarios")) {
    if (entry.path().extension() != ".scenario") continue;
    ++count;
    const auto f = load_scenario_file(entry.path());
    EXPECT_TRUE(validate_settings(f.scenario.settings).empty()) << entry.path();
    EXPECT_EQ(format_scenario(parse_scenario(format_scenario(f))), format_scenario(f)) << entry.path();
  }
  EXPECT_GE(count, 9);
}

TEST(LoadScenarioFile, MissingFileIsConfigError) {
  EXPECT_THROW(load_scenario_file(kSource / "scenarios" / "nope.scenario"), ConfigError);
}

}  // namespace
}  // namespace ventsim

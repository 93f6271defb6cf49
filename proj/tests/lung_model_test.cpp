#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ventsim/errors.hpp"
#include "ventsim/lung_model.hpp"
#include "ventsim/rng.hpp"

namespace ventsim {
namespace {

TEST(LungPresets, MatchReferenceValues) {
  const auto h = healthy_lung();
  EXPECT_EQ(h.c_w, 200.0);
  EXPECT_EQ(h.frc_zeep, 2000.0);
  EXPECT_EQ(h.lip, 5.0);
  EXPECT_EQ(h.uip, 35.0);
  EXPECT_EQ(h.c_1, 25.0);
  EXPECT_EQ(h.c_rs, 60.0);
  EXPECT_EQ(h.c_2, 20.0);
  EXPECT_EQ(h.r_aw, 5.0);
  const auto a = ards_lung();
  EXPECT_EQ(a.c_w, 93.0);
  EXPECT_EQ(a.frc_zeep, 1102.0);
  EXPECT_EQ(a.lip, 12.0);
  EXPECT_EQ(a.uip, 35.0);
  EXPECT_EQ(a.c_1, 8.0);
  EXPECT_EQ(a.c_rs, 35.0);
  EXPECT_EQ(a.c_2, 8.0);
  EXPECT_EQ(a.r_aw, 5.0);
  EXPECT_EQ(lung_preset("ards").c_rs, 35.0);
  EXPECT_THROW(lung_preset("emphysema"), ConfigError);
}

TEST(LungCompliance, SeriesCombinationWithChestWall) {
  const auto h = healthy_lung();
  EXPECT_NEAR(1.0 / h.c_rs, 1.0 / h.c_w + 1.0 / h.lung_compliance(), 1e-12);
}

TEST(PressureVolumeCurve, PiecewiseSlopes) {
  const auto h = healthy_lung();
  EXPECT_DOUBLE_EQ(volume_from_pressure(h, 0.0), 2000.0);
  EXPECT_DOUBLE_EQ(volume_from_pressure(h, 5.0), 2000.0 + 25.0 * 5.0);
  EXPECT_DOUBLE_EQ(volume_from_pressure(h, 35.0), 2125.0 + 60.0 * 30.0);
  EXPECT_DOUBLE_EQ(volume_from_pressure(h, 40.0), 3925.0 + 20.0 * 5.0);
}

TEST(PressureVolumeCurve, ContinuousAtInflectionPoints) {
  for (const auto& p : {healthy_lung(), ards_lung()}) {
    for (double knee : {p.lip, p.uip}) {
      EXPECT_NEAR(volume_from_pressure(p, knee - 1e-9), volume_from_pressure(p, knee + 1e-9),
                  1e-6);
    }
  }
}

TEST(PressureVolumeCurve, RoundTripOverRandomVolumes) {
  Rng rng(7);
  for (const auto& p : {healthy_lung(), ards_lung()}) {
    for (int i = 0; i < 1000; ++i) {
      const double v = p.frc_zeep + 3000.0 * rng.uniform();
      EXPECT_NEAR(volume_from_pressure(p, pressure_from_volume(p, v)), v, 1e-9 * v);
    }
  }
}

TEST(PressureVolumeCurve, RejectsVolumeBelowFrc) {
  EXPECT_THROW(pressure_from_volume(healthy_lung(), 1999.0), std::domain_error);
}

TEST(AirwayPressure, AddsResistiveDrop) {
  const auto h = healthy_lung();
  const LungState s = lung_at_pressure(h, 10.0);
  // 5 mBar/(L/s) at 500 mL/s = 2.5 mBar.
  EXPECT_NEAR(airway_pressure(h, s, 500.0), 12.5, 1e-12);
  EXPECT_NEAR(airway_pressure(h, s, -500.0), 7.5, 1e-12);
}

TEST(StepLung, IntegratesVolumeAndUpdatesPressure) {
  const auto a = ards_lung();
  LungState s = lung_at_pressure(a, 5.0);
  const auto r = step_lung(a, s, 400.0, 1e-3);
  EXPECT_NEAR(r.state.volume, s.volume + 0.4, 1e-12);
  EXPECT_NEAR(r.state.alveolar_pressure, 5.0 + 0.4 / 8.0, 1e-12);
  EXPECT_FALSE(r.clamped);
}

TEST(StepLung, ClampsAtFrc) {
  const auto a = ards_lung();
  const LungState s = lung_at_pressure(a, 0.0);
  const auto r = step_lung(a, s, -1000.0, 1e-3);
  EXPECT_TRUE(r.clamped);
  EXPECT_DOUBLE_EQ(r.state.volume, a.frc_zeep);
}

TEST(StepLung, RejectsStepsAboveLimit) {
  const auto a = ards_lung();
  const LungState s = lung_at_pressure(a, 5.0);
  EXPECT_THROW(step_lung(a, s, 0.0, 2e-3), std::invalid_argument);
  EXPECT_THROW(step_lung(a, s, 0.0, 0.0), std::invalid_argument);
}

TEST(StepLung, ConservesVolumeOverManySteps) {
  const auto h = healthy_lung();
  LungState s = lung_at_pressure(h, 5.0);
  const double v0 = s.volume;
  double in = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double q = 300.0 * std::sin(i * 0.01);
    s = step_lung(h, s, q, 1e-3).state;
    in += q * 1e-3;
  }
  EXPECT_NEAR(s.volume - v0, in, 1e-9);
}

TEST(LungParameters, ValidateRejectsInconsistentValues) {
  auto p = healthy_lung();
  EXPECT_NO_THROW(p.validate());
  p.lip = 40.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = healthy_lung();
  p.c_rs = 250.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = healthy_lung();
  p.c_1 = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace ventsim

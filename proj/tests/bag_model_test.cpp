#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ventsim/bag_model.hpp"
#include "ventsim/errors.hpp"
#include "ventsim/rng.hpp"
#include "ventsim/units.hpp"

namespace ventsim {
namespace {

TEST(ChordDeficit, Endpoints) {
  EXPECT_DOUBLE_EQ(chord_deficit(1.0), 0.0);
  EXPECT_DOUBLE_EQ(chord_deficit(0.0), units::kPi / 2.0);
}

TEST(ChordDeficit, RejectsOutsideUnitInterval) {
  EXPECT_THROW(chord_deficit(1.1), std::domain_error);
  EXPECT_THROW(chord_deficit(-0.1), std::domain_error);
  EXPECT_THROW(chord_deficit(std::nan("")), std::domain_error);
}

TEST(ChordDeficit, MatchesCircularSegmentAreaByMonteCarlo) {
  // psi(x) is the area of the unit-disc segment beyond the chord at x.
  Rng rng(2024);
  const long n = 1000000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    const double x = rng.symmetric();
    const double y = rng.symmetric();
    if (x > 0.5 && x * x + y * y < 1.0) ++hits;
  }
  const double area = 4.0 * static_cast<double>(hits) / static_cast<double>(n);
  EXPECT_NEAR(chord_deficit(0.5), 0.6142, 1e-4);
  EXPECT_NEAR(area, chord_deficit(0.5), 0.006);
}

TEST(ChordDeficit, DecreasesOnUnitInterval) {
  double prev = chord_deficit(0.0);
  for (int i = 1; i <= 100; ++i) {
    const double v = chord_deficit(i / 100.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(BagVolume, FullBagAtRestAndEmptyAtCenter) {
  BagGeometry g;
  const double full = g.l_ambu_mm * g.r_ambu_mm * g.r_ambu_mm * units::kPi * 1e-3;
  EXPECT_NEAR(bag_volume(g, 0.0), full, 1e-9);
  EXPECT_NEAR(bag_volume(g, g.full_stroke_rad()), 0.0, 1e-9);
}

TEST(BagVolume, BoundedAndDecreasing) {
  BagGeometry g;
  const double full = bag_volume(g, 0.0);
  double prev = full;
  for (int i = 1; i <= 500; ++i) {
    const double phi = g.full_stroke_rad() * i / 500.0;
    const double v = bag_volume(g, phi);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, full);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(BagVolume, RejectsPositionsOutsideTheBag) {
  BagGeometry g;
  EXPECT_THROW(bag_volume(g, -0.1), std::domain_error);
  EXPECT_THROW(bag_volume(g, g.full_stroke_rad() + 0.1), std::domain_error);
}

TEST(ContactVolume, ClampsToContactRange) {
  BagGeometry g;
  EXPECT_DOUBLE_EQ(contact_volume(g, -0.05), bag_volume(g, 0.0));
  EXPECT_DOUBLE_EQ(contact_volume(g, 2.0), bag_volume(g, g.full_stroke_rad()));
  EXPECT_DOUBLE_EQ(contact_volume(g, 0.3), bag_volume(g, 0.3));
}

TEST(BagFlowRate, MatchesCentralDifferenceOfVolume) {
  BagGeometry g;
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double phi = 0.01 + (g.phi_max_rad - 0.02) * i / 99.0;
    for (int j = 0; j < 10; ++j) {
      const double phi_dot = -2.0 + 4.0 * j / 9.0 + 0.05;
      const double numeric =
          (bag_volume(g, phi + h) - bag_volume(g, phi - h)) / (2.0 * h) * phi_dot;
      const double analytic = bag_flow_rate(g, phi, phi_dot);
      worst = std::max(worst, std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-12));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(BagFlowRate, ZeroWhenPaddlesStill) {
  BagGeometry g;
  EXPECT_DOUBLE_EQ(bag_flow_rate(g, 0.3, 0.0), 0.0);
}

TEST(GeometricTidalVolume, ZeroAtRestAndIncreasing) {
  BagGeometry g;
  EXPECT_DOUBLE_EQ(geometric_tidal_volume(g, g.phi_0_rad), 0.0);
  double prev = 0.0;
  for (double phi = 0.05; phi <= 0.5 + 1e-12; phi += 0.05) {
    const double v = geometric_tidal_volume(g, phi);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(GeometricTidalVolume, CalibratedDefaultsNearReferenceDisconnectedColumn) {
  BagGeometry g;
  const double measured[] = {197, 260, 340, 428, 488, 506, 517};
  for (int i = 0; i < 7; ++i) {
    const double v = geometric_tidal_volume(g, 0.20 + 0.05 * i);
    EXPECT_LE(std::abs(v - measured[i]) / measured[i], 0.15) << "phi index " << i;
  }
}

TEST(BagPressure, AmbientAtRestAndRisesWhenSqueezed) {
  BagGeometry g;
  EXPECT_DOUBLE_EQ(bag_pressure(g, 0.0, 2000.0), g.p_inf_mbar);
  EXPECT_GT(bag_pressure(g, 0.3, 2000.0), g.p_inf_mbar);
}

TEST(PaddleTorque, ScalesWithPressureAndArea) {
  BagGeometry g;
  const double area = paddle_area(g, 0.25);
  EXPECT_NEAR(area, 2.0 * g.l_ambu_mm * g.r_ambu_mm * std::sqrt(1.0 - 0.25), 1e-9);
  // 10 mBar = 1e-3 N/mm^2.
  EXPECT_NEAR(paddle_torque(g, 0.25, 10.0), g.l_pad_mm * area * 1e-3, 1e-9);
  EXPECT_DOUBLE_EQ(paddle_torque(g, 0.25, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(paddle_area(g, 0.0), 0.0);
}

TEST(BagGeometry, ValidateRejectsInconsistentDimensions) {
  BagGeometry g;
  EXPECT_NO_THROW(g.validate());
  g.phi_max_rad = 0.6;
  EXPECT_THROW(g.validate(), ConfigError);
  g = BagGeometry{};
  g.r_ambu_mm = -1.0;
  EXPECT_THROW(g.validate(), ConfigError);
  g = BagGeometry{};
  g.phi_0_rad = 0.5;
  EXPECT_THROW(g.validate(), ConfigError);
}

}  // namespace
}  // namespace ventsim

#include <cmath>

#include <gtest/gtest.h>

#include "mqrm/model.hpp"
#include "oracles.hpp"

using namespace mqrm;

TEST(ModeTable, SingleModeIsBaseValues) {
  const auto t = build_mode_table(ModelParams(1.0, 1.0, 0.1, 1));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_DOUBLE_EQ(t[0].omega, 1.0);
  EXPECT_DOUBLE_EQ(t[0].coupling, 0.1);
}

TEST(ModeTable, LadderFrequenciesAndCouplings) {
  const auto t = build_mode_table(ModelParams(1.0, 1.0, 0.1, 3));
  ASSERT_EQ(t.size(), 3u);
  EXPECT_DOUBLE_EQ(t[1].omega, 2.0);
  EXPECT_DOUBLE_EQ(t[2].omega, 3.0);
  EXPECT_NEAR(t[1].coupling, 0.1 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(t[2].coupling, 0.1 * std::sqrt(3.0), 1e-15);
}

TEST(ModeTable, FifteenModesTopFrequency) {
  const auto t = build_mode_table(ModelParams::resonant(0.1, 15));
  EXPECT_DOUBLE_EQ(t.back().omega, 15.0);
}

TEST(ModelParams, RejectsInvalid) {
  EXPECT_THROW(ModelParams(1.0, 0.0, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(ModelParams(1.0, 1.0, -0.1, 1), std::invalid_argument);
  EXPECT_THROW(ModelParams(1.0, 1.0, 0.1, 0), std::invalid_argument);
}

TEST(SqueezeCoeffs, NoSqueezing) {
  for (double phi : {0.0, 1.0, 4.0}) {
    const auto c = squeeze_coeffs(SqueezeThermal(0.0, phi, InverseTemperature::infinite()));
    EXPECT_DOUBLE_EQ(c.A, 1.0);
    EXPECT_EQ(c.B, cplx(0.0));
    EXPECT_EQ(c.K, cplx(1.0));
  }
}

TEST(SqueezeCoeffs, ReferenceValues) {
  const auto c = squeeze_coeffs(SqueezeThermal(0.3, 0.0, InverseTemperature::infinite()));
  EXPECT_NEAR(c.A, 1.185465, 1e-6);
  EXPECT_NEAR(std::abs(c.B), 0.318327, 1e-6);
  EXPECT_NEAR(std::norm(c.K), std::exp(0.6), 1e-12);
  const auto d = squeeze_coeffs(SqueezeThermal(0.3, kPi, InverseTemperature::infinite()));
  EXPECT_NEAR(std::norm(d.K), std::exp(-0.6), 1e-12);
}

TEST(SqueezeCoeffs, IdentitiesOverAngles) {
  for (double r : {0.1, 0.5, 1.2}) {
    for (double phi : {0.3, 2.0, 5.5}) {
      const auto c = squeeze_coeffs(SqueezeThermal(r, phi, InverseTemperature::infinite()));
      EXPECT_GE(c.A, 1.0);
      EXPECT_NEAR(std::abs(c.B), 0.5 * std::sinh(2 * r), 1e-12);
      EXPECT_NEAR(std::norm(c.K), std::cosh(2 * r) + std::cos(phi) * std::sinh(2 * r), 1e-12);
    }
  }
}

TEST(SqueezeThermal, WrapsPhiAndRejectsNegativeR) {
  EXPECT_NEAR(SqueezeThermal(0.1, -kPi / 2, InverseTemperature::infinite()).phi(), 1.5 * kPi, 1e-12);
  EXPECT_NEAR(SqueezeThermal(0.1, 5 * kPi, InverseTemperature::infinite()).phi(), kPi, 1e-12);
  EXPECT_THROW(SqueezeThermal(-0.1, 0.0, InverseTemperature::infinite()), std::invalid_argument);
}

TEST(ThermalAngles, ZeroTemperature) {
  const auto modes = build_mode_table(ModelParams::resonant(0.1, 5));
  for (double th : thermal_angles(SqueezeThermal::vacuum(), modes)) EXPECT_EQ(th, 0.0);
}

TEST(ThermalAngles, ReferenceAngleAndBoseIdentity) {
  const auto modes = build_mode_table(ModelParams::resonant(0.1, 3));
  const auto beta = InverseTemperature::finite(0.5);
  const auto th = thermal_angles(SqueezeThermal::thermal(beta), modes);
  EXPECT_NEAR(th[0], 1.04232, 1e-5);
  EXPECT_NEAR(std::pow(std::sinh(th[0]), 2), 1.54149, 1e-5);
  for (std::size_t m = 0; m < modes.size(); ++m) {
    EXPECT_NEAR(std::pow(std::sinh(th[m]), 2), oracle::bose(0.5, modes[m].omega), 1e-12);
    EXPECT_NEAR(bose_occupation(beta, modes[m].omega), oracle::bose(0.5, modes[m].omega), 1e-14);
  }
  EXPECT_NEAR(std::cosh(th[0]), 1.5943, 1e-4);
  EXPECT_NEAR(std::sinh(th[0]), 1.2416, 1e-4);
}

TEST(InverseTemperature, Parse) {
  EXPECT_TRUE(InverseTemperature::parse("inf").is_infinite());
  EXPECT_TRUE(InverseTemperature::parse("INF").is_infinite());
  EXPECT_DOUBLE_EQ(InverseTemperature::parse("0.5").value(), 0.5);
  EXPECT_TRUE(std::isinf(InverseTemperature::infinite().value()));
  EXPECT_THROW(InverseTemperature::parse("-1"), std::invalid_argument);
  EXPECT_THROW(InverseTemperature::parse("hot"), std::invalid_argument);
  EXPECT_THROW(InverseTemperature::finite(0.0), std::invalid_argument);
}

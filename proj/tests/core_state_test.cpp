#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "digester/core_state.hpp"

namespace digester {
namespace {

constexpr double kEps = 1e-9;

TEST(Consistency, ReferenceInventory) {
  // 2500 / (27500 + 1e-9), evaluated at 40 digits.
  EXPECT_NEAR(consistency(2500, 25000, kEps), 0.0909090909090876033, 1e-15);
}

TEST(Consistency, SinglePhaseLimits) {
  EXPECT_EQ(consistency(0, 25000, kEps), 0.0);
  EXPECT_NEAR(consistency(2500, 0, kEps), 1.0, 1e-12);
  EXPECT_LT(consistency(2500, 0, kEps), 1.0);
}

TEST(Consistency, RejectsNonFinite) {
  EXPECT_THROW(consistency(std::nan(""), 1.0, kEps), StateError);
  EXPECT_THROW(consistency(1.0, std::numeric_limits<double>::infinity(), kEps), StateError);
}

TEST(MixtureDensity, ReferenceInventory) {
  EXPECT_NEAR(mixture_density(2500, 25000, 1050, 1100, kEps), 1095.2586206460337, 1e-9);
}

TEST(MixtureDensity, SinglePhaseLimits) {
  EXPECT_NEAR(mixture_density(0, 25000, 1050, 1100, kEps) / 1100.0, 1.0, 1e-6);
  EXPECT_NEAR(mixture_density(2500, 0, 1050, 1100, kEps) / 1050.0, 1.0, 1e-6);
}

TEST(MixtureDensity, RejectsBadInputs) {
  EXPECT_THROW(mixture_density(std::nan(""), 1, 1050, 1100, kEps), StateError);
  EXPECT_THROW(mixture_density(1, 1, 0, 1100, kEps), ParameterError);
}

TEST(PhaseVolumes, ReferenceInventory) {
  const auto v = phase_volumes(2500, 25000, 1050, 1100, 0.0);
  EXPECT_NEAR(v.V_s, 2.3809523809523810, 1e-12);
  EXPECT_NEAR(v.V_fl, 22.727272727272727, 1e-12);
  EXPECT_NEAR(v.V, 25.108225108225108, 1e-12);
  EXPECT_EQ(v.M_total, 27500.0);
}

TEST(PhaseVolumes, EmptyVessel) {
  const auto v = phase_volumes(0, 0, 1050, 1100, 0.0);
  EXPECT_EQ(v.V_s, 0.0);
  EXPECT_EQ(v.V_fl, 0.0);
  EXPECT_EQ(v.V, 0.0);
  EXPECT_EQ(v.M_total, 0.0);
}

TEST(PhaseVolumes, VoidFractionDoublesSolidVolume) {
  EXPECT_NEAR(phase_volumes(2500, 0, 1050, 1100, 0.5).V_s, 4.7619047619047619, 1e-12);
}

TEST(PhaseVolumes, RejectsVoidFractionOfOne) {
  EXPECT_THROW(phase_volumes(1, 1, 1050, 1100, 1.0), ParameterError);
}

TEST(Parameters, DefaultsAreAdmissible) {
  EXPECT_TRUE(check(Parameters{}).empty());
  EXPECT_NO_THROW(validate(Parameters{}));
}

TEST(Parameters, ViolationsNameTheField) {
  Parameters p;
  p.n = -1;
  p.eta_pm = 1.5;
  const auto v = check(p);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].field, "n");
  EXPECT_EQ(v[1].field, "eta_pm");
  EXPECT_THROW(validate(p), ParameterError);
}

TEST(ProcessState, ArrayRoundTripAndFiniteness) {
  ProcessState x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_EQ(ProcessState::from_array(x.to_array()), x);
  EXPECT_TRUE(x.first_non_finite().empty());
  x.H0 = std::nan("");
  EXPECT_EQ(x.first_non_finite(), "H0");
}

class MixtureProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{42};
  std::uniform_real_distribution<double> mass{1.0, 5.0e4};
};

TEST_F(MixtureProperties, ConsistencyMonotoneInEachMass) {
  for (int i = 0; i < 500; ++i) {
    const double ms = mass(rng), mf = mass(rng), d = 1.0 + mass(rng) * 1e-3;
    EXPECT_GT(consistency(ms + d, mf, kEps), consistency(ms, mf, kEps));
    EXPECT_LT(consistency(ms, mf + d, kEps), consistency(ms, mf, kEps));
  }
}

TEST_F(MixtureProperties, ConsistencyComplement) {
  for (int i = 0; i < 500; ++i) {
    const double ms = mass(rng), mf = mass(rng);
    const double sum = consistency(ms, mf, kEps) + consistency(mf, ms, kEps);
    EXPECT_LE(std::abs(sum - 1.0), kEps / (ms + mf) + 4e-16);
  }
}

TEST_F(MixtureProperties, DensityBetweenPhaseDensities) {
  for (int i = 0; i < 500; ++i) {
    const double rho = mixture_density(mass(rng), mass(rng), 1050, 1100, kEps);
    EXPECT_GE(rho, 1050.0 * (1 - 1e-12));
    EXPECT_LE(rho, 1100.0);
  }
}

TEST_F(MixtureProperties, DensityTimesVolumeIsMass) {
  for (int i = 0; i < 500; ++i) {
    const double ms = mass(rng), mf = mass(rng);
    const auto v = phase_volumes(ms, mf, 1050, 1100, 0.0);
    const double rho = mixture_density(ms, mf, 1050, 1100, kEps);
    EXPECT_LE(std::abs(rho * v.V - v.M_total) / v.M_total, 1e-9);
  }
}

}  // namespace
}  // namespace digester

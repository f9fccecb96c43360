#include <gtest/gtest.h>

#include "digester/energetics.hpp"

namespace digester {
namespace {

TEST(Power, Values) {
  EXPECT_NEAR(hydraulic_power(113.51, 0.003), 0.34053, 1e-12);
  EXPECT_EQ(hydraulic_power(113.51, 0.0), 0.0);
  EXPECT_NEAR(useful_power(10.9526, 0.003), 0.0328578, 1e-12);
  EXPECT_EQ(useful_power(10.9526, 0.0), 0.0);
  EXPECT_EQ(useful_power(0.0, 0.003), 0.0);
  EXPECT_NEAR(hydraulic_power_si(1000.0, 10.0, 0.001), 98.1, 1e-12);
}

TEST(Efficiency, Values) {
  EXPECT_NEAR(efficiency(0.0328578, 0.34053, 1e-9).value, 0.0964901767935566, 1e-12);
  EXPECT_NEAR(efficiency(0.5, 0.5, 1e-9).value, 1.0, 1e-8);
  EXPECT_EQ(efficiency(0.0, 0.0, 1e-9).value, 0.0);
}

TEST(Efficiency, ClampsIntoUnitInterval) {
  const auto hi = efficiency(2.0, 1.0, 1e-9);
  EXPECT_EQ(hi.value, 1.0);
  EXPECT_TRUE(hi.clamped);
  EXPECT_GT(hi.raw, 1.0);
  const auto lo = efficiency(-1.0, 1.0, 1e-9);
  EXPECT_EQ(lo.value, 0.0);
  EXPECT_TRUE(lo.clamped);
  EXPECT_FALSE(efficiency(0.1, 1.0, 1e-9).clamped);
}

TEST(ElectricalPower, Values) {
  EXPECT_NEAR(electrical_power(0.34053, 0.65), 0.5238923076923077, 1e-12);
  EXPECT_EQ(electrical_power(0.34053, 1.0), 0.34053);
  EXPECT_EQ(electrical_power(0.0, 0.65), 0.0);
  EXPECT_THROW(electrical_power(1.0, 0.0), ParameterError);
}

}  // namespace
}  // namespace digester

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "digester/hydraulics.hpp"
#include "digester/smc.hpp"

namespace digester {
namespace {

TEST(StaticHead, Values) {
  EXPECT_NEAR(static_head(1095.26, 0.01), 10.9526, 1e-12);
  EXPECT_EQ(static_head(0.0, 0.01), 0.0);
}

TEST(AlgebraicFlow, Values) {
  EXPECT_EQ(algebraic_flow(5, 10, 8000, 0.75, 1e-9), 0.0);
  EXPECT_DOUBLE_EQ(algebraic_flow(10.0 + 8000.0 + 1e-9, 10.0, 8000.0, 0.75, 1e-9), 1.0);
  EXPECT_NEAR(algebraic_flow(20.9526, 10.9526, 8000, 0.75, 1e-9), 1.346521681269703e-4, 1e-15);
  EXPECT_THROW(algebraic_flow(20, 10, 8000, 0.0, 1e-9), ParameterError);
}

TEST(Lags, Values) {
  EXPECT_EQ(flow_relaxation_rhs(0.002, 0.002, 120), 0.0);
  EXPECT_NEAR(flow_relaxation_rhs(0.002, 0.001, 120), 8.333333333333333e-6, 1e-18);
  EXPECT_EQ(actuator_rhs(40, 40, 300), 0.0);
  EXPECT_NEAR(actuator_rhs(100, 40, 300), 0.2, 1e-15);
}

TEST(TransportFlows, Values) {
  EXPECT_NEAR(fiber_flow(1095.26, 0.0909091, 0.003), 0.298707302598, 1e-9);
  EXPECT_EQ(fiber_flow(1095.26, 0.0909091, 0.0), 0.0);
  EXPECT_EQ(fiber_flow(1095.26, 0.0, 0.003), 0.0);
  EXPECT_NEAR(liquor_flow(0.5, 0.2, 0.0909091, 1095.26, 0.003), 1.466381139645, 1e-9);
  EXPECT_EQ(liquor_flow(1.0, 0.2, 0.0909091, 1095.26, 0.003), 0.0);
  EXPECT_EQ(liquor_flow(0.5, 0.2, 1.0, 1095.26, 0.003), 0.0);
}

TEST(HydraulicsProperties, FlowNonNegativeAndMonotoneInHead) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> h(0.0, 120.0), cn(1.0, 1e6), n(0.3, 1.5);
  for (int i = 0; i < 500; ++i) {
    const double H0 = h(rng), Hs = h(rng), Cn = cn(rng), ni = n(rng);
    const double q = algebraic_flow(H0, Hs, Cn, ni, 1e-9);
    EXPECT_GE(q, 0.0);
    EXPECT_GE(algebraic_flow(H0 + 1.0, Hs, Cn, ni, 1e-9), q);
  }
}

// Inversion loses relative accuracy to the cancellation H0 - H_static, so
// the bound scales with H0 / (H0 - H_static).
TEST(HydraulicsProperties, EquivalentHeadInvertsFlowLaw) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> lcn(0.0, 6.0), n(0.3, 1.5), q(1e-6, 0.004), hs(0.0, 11.0);
  constexpr double u = 1.1102230246251565e-16;
  for (int i = 0; i < 2000; ++i) {
    const double Cn = std::pow(10.0, lcn(rng)), ni = n(rng), qc = q(rng), Hs = hs(rng);
    const double H0 = equivalent_head(Hs, Cn, qc, ni, 1e-9);
    const double back = algebraic_flow(H0, Hs, Cn, ni, 1e-9);
    const double bound = 8.0 * u * (1.0 + H0 / ((Cn + 1e-9) * std::pow(qc, ni)) / ni);
    EXPECT_LE(std::abs(back - qc) / qc, bound) << "C_n=" << Cn << " n=" << ni << " q=" << qc;
  }
}

}  // namespace
}  // namespace digester

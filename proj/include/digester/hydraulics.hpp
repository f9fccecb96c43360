#pragma once

// Static head, quasi-steady pressure-flow law, first-order lags and the two
// transport flows that couple the hydraulics to the mass balances.

#include <algorithm>
#include <cmath>

#include "digester/errors.hpp"

namespace digester {

inline double static_head(double rho_mix, double K_static) { return K_static * rho_mix; }

/// Flow sustained by the head surplus over the slurry column; zero when the
/// applied head does not exceed the static head.
inline double algebraic_flow(double H0, double H_static, double C_n, double n, double eps) {
  if (!(n > 0.0)) throw ParameterError("n must be > 0");
  const double surplus = std::max(H0 - H_static, 0.0);
  return std::pow(surplus / (C_n + eps), 1.0 / n);
}

inline double flow_relaxation_rhs(double q_p_alg, double q_p, double tau_p) {
  return (q_p_alg - q_p) / tau_p;
}

inline double actuator_rhs(double H0s, double H0, double tau_H) { return (H0s - H0) / tau_H; }

/// Discharged fiber mass flow [kg/s].
inline double fiber_flow(double rho_mix, double C, double q_p) { return rho_mix * C * q_p; }

/// Entrained-liquor mass flow [kg/s], reduced by channeling and drainability.
inline double liquor_flow(double k_ch, double gamma_K, double C, double rho_mix, double q_p) {
  return (1.0 - k_ch) * (1.0 - gamma_K * C) * rho_mix * (1.0 - C) * q_p;
}

}  // namespace digester

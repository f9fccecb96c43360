#pragma once

// Herschel-Bulkley constitutive law and the consistency-dependent
// blow-line resistance.

#include <cmath>
#include <numbers>

#include "digester/errors.hpp"

namespace digester {

struct RheologyState {
  double gamma_dot = 0;  ///< shear rate [1/s]
  double tau = 0;        ///< shear stress [Pa]
  double C_n = 0;        ///< hydraulic resistance
  double Phi_v = 0;      ///< volumetric dissipation [W/m^3]
};

/// Newtonian pipe-wall shear rate 8v/D = 32 q / (pi D^3).
inline double shear_rate(double q_p, double D_pipe) {
  if (!(D_pipe > 0.0)) throw ParameterError("D_pipe must be > 0");
  return 32.0 * q_p / (std::numbers::pi * D_pipe * D_pipe * D_pipe);
}

inline double hb_stress(double gamma_dot, double tau_y, double K_HB, double n) {
  if (!(gamma_dot >= 0.0)) throw DomainError("shear rate must be >= 0");
  return tau_y + K_HB * std::pow(gamma_dot, n);
}

/// K_ref ((C + eps) / C_ref)^alpha_C.
inline double hydraulic_resistance(double C, double K_ref, double C_ref, double alpha_C,
                                   double eps) {
  if (!(C_ref > 0.0)) throw ParameterError("C_ref must be > 0");
  return K_ref * std::pow((C + eps) / C_ref, alpha_C);
}

inline double viscous_dissipation(double tau, double gamma_dot) { return tau * gamma_dot; }

}  // namespace digester

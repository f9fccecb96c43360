#pragma once

// Transport powers and efficiency. Powers are head x flow [m m^3/s]; the SI
// wattage rho g H q is a reported companion only.

#include <algorithm>

#include "digester/errors.hpp"

namespace digester {

inline constexpr double kGravity = 9.81;

inline double hydraulic_power(double H0, double q_p) { return H0 * q_p; }

inline double hydraulic_power_si(double rho_mix, double H0, double q_p) {
  return rho_mix * kGravity * H0 * q_p;
}

/// Power spent lifting the slurry column; losses are the excess over it.
inline double useful_power(double H_static, double q_p) { return H_static * q_p; }

struct Efficiency {
  double value;    ///< clamped to [0, 1]
  double raw;      ///< P_useful / (P_h + eps)
  bool clamped;
};

inline Efficiency efficiency(double P_useful, double P_h, double eps) {
  const double raw = P_useful / (P_h + eps);
  const double value = std::clamp(raw, 0.0, 1.0);
  return {value, raw, value != raw};
}

inline double electrical_power(double P_h, double eta_pm) {
  if (!(eta_pm > 0.0)) throw ParameterError("eta_pm must be > 0");
  return P_h / eta_pm;
}

}  // namespace digester

#pragma once

// Domain types of the blowdown model and the algebraic mixture
// reconstructions (consistency, phase volumes, slurry density).

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "digester/errors.hpp"

namespace digester {

/// Physical, rheological, hydraulic, controller and numerical constants.
///
/// Defaults are the reference process values; members tagged "not-in-paper"
/// below are gap-filling choices and are configurable through scenarios.
struct Parameters {
  double rho_s = 1050.0;   ///< dry-fiber density [kg/m^3]
  double rho_fl = 1100.0;  ///< free-liquor density [kg/m^3]
  double w = 0.0;          ///< solid void fraction [-] (not-in-paper)
  double n = 0.75;         ///< Herschel-Bulkley flow index [-]
  double K_ref = 8.0e3;    ///< reference hydraulic resistance
  double C_ref = 0.10;     ///< reference consistency [-]
  double alpha_C = 2.0;    ///< consistency-resistance exponent [-]
  double tau_y = 50.0;     ///< yield stress [Pa]
  double K_HB = 75.0;      ///< HB consistency index [Pa s^n]
  double D_pipe = 0.20;    ///< blow-line diameter [m]
  double L_eff = 20.0;     ///< effective pipeline length [m]
  double K_static = 0.01;  ///< head per density [m m^3/kg] (not-in-paper)
  double tau_p = 120.0;    ///< hydraulic relaxation time [s] (not-in-paper)
  double tau_H = 300.0;    ///< actuator time constant [s]
  double tau_ref = 500.0;  ///< reference conditioning time [s] (not-in-paper)
  double H0_max = 120.0;   ///< head bound [m]
  double q_p_max = 0.004;  ///< flow bound [m^3/s]
  double lambda_q = 1e-4;  ///< sliding-manifold gain [1/s]
  double k_smc = 3.0;      ///< switching gain [m]
  double phi_q = 5e-4;     ///< boundary-layer thickness [m^3/s]
  double C_max = 0.30;     ///< supervisory consistency limit (not-in-paper)
  double alpha_sig = 200;  ///< guard sigmoid steepness (not-in-paper)
  double eps = 1e-9;       ///< shared regularization (not-in-paper)
  double eta_pm = 0.65;    ///< pump-motor efficiency (not-in-paper)
};

/// One failed range check, keyed by the member name.
struct Violation {
  std::string field;
  std::string message;
};

/// Range checks for Parameters. k_smc = 0 is admitted: it is the
/// "switching disabled" configuration used for ablation runs.
inline std::vector<Violation> check(const Parameters& p) {
  std::vector<Violation> out;
  auto need = [&](bool ok, std::string_view field, std::string_view msg) {
    if (!ok) out.push_back({std::string(field), std::string(msg)});
  };
  auto pos = [&](double v, std::string_view field) {
    need(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
  };
  pos(p.rho_s, "rho_s");
  pos(p.rho_fl, "rho_fl");
  need(std::isfinite(p.w) && p.w >= 0.0 && p.w < 1.0, "w", "must be in [0, 1)");
  need(std::isfinite(p.n) && p.n > 0.0 && p.n <= 2.0, "n", "must be in (0, 2]");
  pos(p.K_ref, "K_ref");
  need(std::isfinite(p.C_ref) && p.C_ref > 0.0 && p.C_ref < 1.0, "C_ref", "must be in (0, 1)");
  need(std::isfinite(p.alpha_C) && p.alpha_C >= 0.0, "alpha_C", "must be finite and >= 0");
  need(std::isfinite(p.tau_y) && p.tau_y >= 0.0, "tau_y", "must be finite and >= 0");
  need(std::isfinite(p.K_HB) && p.K_HB >= 0.0, "K_HB", "must be finite and >= 0");
  pos(p.D_pipe, "D_pipe");
  pos(p.L_eff, "L_eff");
  need(std::isfinite(p.K_static) && p.K_static >= 0.0, "K_static", "must be finite and >= 0");
  pos(p.tau_p, "tau_p");
  pos(p.tau_H, "tau_H");
  pos(p.tau_ref, "tau_ref");
  pos(p.H0_max, "H0_max");
  pos(p.q_p_max, "q_p_max");
  need(std::isfinite(p.lambda_q) && p.lambda_q >= 0.0, "lambda_q", "must be finite and >= 0");
  need(std::isfinite(p.k_smc) && p.k_smc >= 0.0, "k_smc", "must be finite and >= 0");
  pos(p.phi_q, "phi_q");
  need(std::isfinite(p.C_max) && p.C_max > 0.0 && p.C_max < 1.0, "C_max", "must be in (0, 1)");
  pos(p.alpha_sig, "alpha_sig");
  pos(p.eps, "eps");
  need(std::isfinite(p.eta_pm) && p.eta_pm > 0.0 && p.eta_pm <= 1.0, "eta_pm", "must be in (0, 1]");
  return out;
}

inline void validate(const Parameters& p) {
  if (auto v = check(p); !v.empty()) {
    throw ParameterError(v.front().field + ": " + v.front().message);
  }
}

/// Time-dependent process inputs, held piecewise constant by the engine.
struct ExogenousInputs {
  double k_ch = 0.50;     ///< channeling factor [-]
  double gamma_K = 0.20;  ///< drainability coefficient [-]
  double f_in = 1.0e-4;   ///< inlet dilution flow [m^3/s]
  double f_fl = 0.0;      ///< free-liquor extraction flow [m^3/s] (not-in-paper)
  double q_p_ref = 2.0e-4;  ///< raw discharge reference [m^3/s] (not-in-paper)
};

inline std::vector<Violation> check(const ExogenousInputs& u, const Parameters& p) {
  std::vector<Violation> out;
  auto unit = [&](double v, std::string_view field) {
    if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0)) {
      out.push_back({std::string(field), "must be in [0, 1]"});
    }
  };
  auto nonneg = [&](double v, std::string_view field) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      out.push_back({std::string(field), "must be finite and >= 0"});
    }
  };
  unit(u.k_ch, "k_ch");
  unit(u.gamma_K, "gamma_K");
  nonneg(u.f_in, "f_in");
  nonneg(u.f_fl, "f_fl");
  if (!(std::isfinite(u.q_p_ref) && u.q_p_ref >= 0.0 && u.q_p_ref <= p.q_p_max)) {
    out.push_back({"q_p_ref", "must be in [0, q_p_max]"});
  }
  return out;
}

/// Integrated dynamic state. Controller memory (xi_eq, q_p_cmd) and the
/// energy quadratures ride along with the plant.
struct ProcessState {
  double M_s = 2500.0;    ///< dry-fiber mass [kg]
  double M_fl = 25000.0;  ///< free-liquor mass [kg]
  double q_p = 0.0;       ///< discharge flow [m^3/s]
  double xi_eq = 0.0;     ///< integral sliding state [m^3]
  double H0 = 0.0;        ///< applied head [m]
  double q_p_cmd = 0.0;   ///< conditioned reference [m^3/s]
  double E_h = 0.0;
  double E_useful = 0.0;
  double E_elec = 0.0;

  static constexpr std::size_t kSize = 9;
  static constexpr std::array<std::string_view, kSize> kNames = {
      "M_s", "M_fl", "q_p", "xi_eq", "H0", "q_p_cmd", "E_h", "E_useful", "E_elec"};

  [[nodiscard]] std::array<double, kSize> to_array() const {
    return {M_s, M_fl, q_p, xi_eq, H0, q_p_cmd, E_h, E_useful, E_elec};
  }

  static ProcessState from_array(const std::array<double, kSize>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
  }

  /// Name of the first non-finite member, or empty.
  [[nodiscard]] std::string_view first_non_finite() const {
    const auto a = to_array();
    for (std::size_t i = 0; i < kSize; ++i) {
      if (!std::isfinite(a[i])) return kNames[i];
    }
    return {};
  }

  friend bool operator==(const ProcessState&, const ProcessState&) = default;
};

/// Algebraic quantities reconstructed at one instant.
struct MixtureSnapshot {
  double C = 0, M_total = 0, V_s = 0, V_fl = 0, V = 0, rho_mix = 0;
  double C_n = 0, H_static = 0, q_p_alg = 0;
  double sigma_C = 0, q_p_star = 0, q_p_cmd = 0, e_q = 0, s_q = 0;
  double H_eq = 0, H_sw = 0, H0s = 0, H0s_raw = 0;
  double gamma_dot = 0, tau = 0, Phi_v = 0;
  double f_s = 0, f_liq = 0;
  double P_h = 0, P_useful = 0, P_elec = 0, P_h_si = 0;
  double eta_h = 0, eta_h_raw = 0;
  bool eta_clamped = false;
  double V_lyap = 0;
};

namespace detail {
inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw StateError(std::string(what) + " is not finite");
}
}  // namespace detail

/// Fiber mass fraction M_s / (M_s + M_fl + eps), in [0, 1).
inline double consistency(double M_s, double M_fl, double eps) {
  detail::require_finite(M_s, "M_s");
  detail::require_finite(M_fl, "M_fl");
  return M_s / (M_s + M_fl + eps);
}

/// Effective slurry density from the phase masses (volume-additive mixing).
inline double mixture_density(double M_s, double M_fl, double rho_s, double rho_fl, double eps) {
  detail::require_finite(M_s, "M_s");
  detail::require_finite(M_fl, "M_fl");
  if (!(rho_s > 0.0) || !(rho_fl > 0.0)) throw ParameterError("phase densities must be > 0");
  return (M_s + M_fl) / (M_s / rho_s + M_fl / rho_fl + eps);
}

struct PhaseVolumes {
  double V_s;
  double V_fl;
  double V;
  double M_total;
};

inline PhaseVolumes phase_volumes(double M_s, double M_fl, double rho_s, double rho_fl, double w) {
  if (!(w >= 0.0 && w < 1.0)) throw ParameterError("w must be in [0, 1)");
  detail::require_finite(M_s, "M_s");
  detail::require_finite(M_fl, "M_fl");
  const double V_fl = M_fl / rho_fl;
  const double V_s = M_s / (rho_s * (1.0 - w));
  return {V_s, V_fl, V_s + V_fl, M_s + M_fl};
}

}  // namespace digester

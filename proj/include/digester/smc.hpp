#pragma once

// Sliding-mode discharge-flow controller: supervisory consistency guard,
// integral sliding manifold, equivalent + boundary-layer switching action,
// head bounding, and Lyapunov / gain diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "digester/core_state.hpp"
#include "digester/errors.hpp"

namespace digester {

struct ControllerOutput {
  double q_p_cmd = 0;  ///< conditioned protected reference [m^3/s]
  double e_q = 0;      ///< tracking error [m^3/s]
  double s_q = 0;      ///< sliding variable [m^3/s]
  double H_eq = 0;     ///< equivalent head [m]
  double H_sw = 0;     ///< switching head [m]
  double H0s = 0;      ///< bounded head command [m]
  double H0s_raw = 0;  ///< command before bounding [m]
  double sigma_C = 0;  ///< guard value [-]
  double q_p_star = 0; ///< protected (unfiltered) reference [m^3/s]
  double V = 0;        ///< Lyapunov value 0.5 s^2
  bool clamp_hi = false;
  bool clamp_lo = false;
};

/// Logistic guard 1 / (1 + exp(-alpha (C_max - C))); 0.5 at C = C_max.
inline double consistency_guard(double C, double C_max, double alpha_sig) {
  return 1.0 / (1.0 + std::exp(-alpha_sig * (C_max - C)));
}

inline double protected_reference(double sigma_C, double q_p_ref) { return sigma_C * q_p_ref; }

/// First-order conditioning filter pulling q_p_cmd toward the protected reference.
inline double reference_conditioner_rhs(double q_p_cmd, double q_p_star, double tau_ref) {
  return (q_p_star - q_p_cmd) / tau_ref;
}

inline double sliding_surface(double e_q, double xi_eq, double lambda_q) {
  return e_q + lambda_q * xi_eq;
}

inline double saturation(double x) { return std::clamp(x, -1.0, 1.0); }

/// Head that makes the quasi-steady flow law deliver q_p_cmd exactly.
inline double equivalent_head(double H_static, double C_n, double q_p_cmd, double n, double eps) {
  return H_static + (C_n + eps) * std::pow(q_p_cmd, n);
}

inline double control_law(double H_eq, double s_q, double k_smc, double phi_q, double H0_max) {
  return std::clamp(H_eq - k_smc * saturation(s_q / phi_q), 0.0, H0_max);
}

/// Full controller evaluation from the current reconstruction and states.
inline ControllerOutput evaluate_controller(double C, double C_n, double H_static, double q_p,
                                            double q_p_cmd, double xi_eq, double q_p_ref,
                                            const Parameters& p) {
  ControllerOutput out;
  out.sigma_C = consistency_guard(C, p.C_max, p.alpha_sig);
  out.q_p_star = protected_reference(out.sigma_C, q_p_ref);
  out.q_p_cmd = q_p_cmd;
  out.e_q = q_p - q_p_cmd;
  out.s_q = sliding_surface(out.e_q, xi_eq, p.lambda_q);
  out.H_eq = equivalent_head(H_static, C_n, std::max(q_p_cmd, 0.0), p.n, p.eps);
  out.H_sw = -p.k_smc * saturation(out.s_q / p.phi_q);
  out.H0s_raw = out.H_eq + out.H_sw;
  out.H0s = std::clamp(out.H0s_raw, 0.0, p.H0_max);
  out.clamp_hi = out.H0s_raw > p.H0_max;
  out.clamp_lo = out.H0s_raw < 0.0;
  out.V = 0.5 * out.s_q * out.s_q;
  return out;
}

/// Conditional anti-windup: the integral pauses while the head command is
/// clamped and integrating e_q would push it further into the clamp.
inline double integral_rate(const ControllerOutput& c) {
  if ((c.clamp_hi && c.e_q < 0.0) || (c.clamp_lo && c.e_q > 0.0)) return 0.0;
  return c.e_q;
}

struct LyapunovSample {
  double V;
  double dVdt;
};

/// V = s^2/2 and a backward-difference estimate of dV/dt = s ds/dt.
inline LyapunovSample lyapunov_diagnostics(double s_q, double s_q_prev, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  return {0.5 * s_q * s_q, s_q * (s_q - s_q_prev) / dt};
}

/// Outcome of the global-attractivity gain test k_smc > tau_p * delta_max.
struct GainCheck {
  bool satisfied = false;
  double k_smc = 0;
  double tau_p = 0;
  double delta_max = 0;
  static constexpr const char* kNote = "paper-sign-adjusted";
};

inline bool check_gain_condition(double k_smc, double tau_p, double delta_max) {
  return k_smc > tau_p * delta_max;
}

/// Empirical bound on the lumped sliding disturbance,
/// max |ds/dt + (k_smc/tau_p) sat(s/phi)|, using forward differences of a
/// logged s_q series.
inline double estimate_delta_max(std::span<const double> t, std::span<const double> s_q,
                                 const Parameters& p) {
  if (t.size() != s_q.size()) throw DomainError("time and s_q series differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    if (!(dt > 0.0)) continue;
    const double ds = (s_q[i + 1] - s_q[i]) / dt;
    const double delta = ds + (p.k_smc / p.tau_p) * saturation(s_q[i] / p.phi_q);
    worst = std::max(worst, std::abs(delta));
  }
  return worst;
}

inline GainCheck gain_check(std::span<const double> t, std::span<const double> s_q,
                            const Parameters& p) {
  GainCheck g;
  g.k_smc = p.k_smc;
  g.tau_p = p.tau_p;
  g.delta_max = estimate_delta_max(t, s_q, p);
  g.satisfied = check_gain_condition(p.k_smc, p.tau_p, g.delta_max);
  return g;
}

struct Interval {
  double lo;
  double hi;
};

/// Rectangular s_q = e + lambda xi grid. Row-major: rows follow xi, columns e.
struct ManifoldGrid {
  std::vector<double> e;
  std::vector<double> xi;
  std::vector<double> s;

  [[nodiscard]] double at(std::size_t row, std::size_t col) const { return s[row * e.size() + col]; }
};

inline ManifoldGrid manifold_grid(Interval e_range, Interval xi_range, double lambda_q,
                                  std::size_t steps) {
  if (steps < 2) throw DomainError("manifold grid needs at least 2 steps");
  if (!(e_range.hi > e_range.lo) || !(xi_range.hi > xi_range.lo)) {
    throw DomainError("manifold grid ranges must satisfy lo < hi");
  }
  // Convex-combination spacing so symmetric ranges hit 0 exactly.
  auto axis = [steps](Interval r) {
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(steps - 1);
      v[i] = r.lo * (1.0 - f) + r.hi * f;
    }
    return v;
  };
  ManifoldGrid g{axis(e_range), axis(xi_range), {}};
  g.s.reserve(steps * steps);
  for (double xi : g.xi) {
    for (double e : g.e) g.s.push_back(sliding_surface(e, xi, lambda_q));
  }
  return g;
}

}  // namespace digester

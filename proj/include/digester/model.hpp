#pragma once

// Right-hand side of the closed-loop blowdown model and the state
// protections applied after every accepted step.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "digester/core_state.hpp"
#include "digester/energetics.hpp"
#include "digester/hydraulics.hpp"
#include "digester/rheology.hpp"
#include "digester/scenario.hpp"
#include "digester/smc.hpp"

namespace digester {

/// Integration failure carrying the time and the last good state.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double t, const ProcessState& state)
      : Error(what + " at t = " + std::to_string(t)), t_(t), state_(state) {}

  [[nodiscard]] double time() const { return t_; }
  [[nodiscard]] const ProcessState& state() const { return state_; }

 private:
  double t_;
  ProcessState state_;
};

using StateVector = std::array<double, ProcessState::kSize>;

namespace protection {
inline constexpr std::uint32_t kFiberFloor = 1u << 0;
inline constexpr std::uint32_t kLiquorFloor = 1u << 1;
inline constexpr std::uint32_t kFlowFloor = 1u << 2;
inline constexpr std::uint32_t kFlowCeiling = 1u << 3;
inline constexpr std::uint32_t kHeadFloor = 1u << 4;
inline constexpr std::uint32_t kHeadCeiling = 1u << 5;
inline constexpr std::uint32_t kCommandFloor = 1u << 6;
inline constexpr std::uint32_t kCommandCeiling = 1u << 7;
}  // namespace protection

struct Protected {
  ProcessState state;
  std::uint32_t mask = 0;
};

/// Clamp masses, flow, head and command into their admissible boxes.
/// Non-finite states cannot be repaired and raise StateError.
inline Protected apply_protections(const ProcessState& x, const Parameters& p) {
  if (auto bad = x.first_non_finite(); !bad.empty()) {
    throw StateError("non-finite state member " + std::string(bad));
  }
  Protected r{x, 0};
  auto clamp = [&r](double& v, double lo, double hi, std::uint32_t lo_bit, std::uint32_t hi_bit) {
    if (v < lo) {
      v = lo;
      r.mask |= lo_bit;
    } else if (v > hi) {
      v = hi;
      r.mask |= hi_bit;
    }
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  clamp(r.state.M_s, 0.0, kInf, protection::kFiberFloor, 0);
  clamp(r.state.M_fl, 0.0, kInf, protection::kLiquorFloor, 0);
  clamp(r.state.q_p, 0.0, p.q_p_max, protection::kFlowFloor, protection::kFlowCeiling);
  clamp(r.state.H0, 0.0, p.H0_max, protection::kHeadFloor, protection::kHeadCeiling);
  clamp(r.state.q_p_cmd, 0.0, p.q_p_max, protection::kCommandFloor, protection::kCommandCeiling);
  return r;
}

struct Evaluation {
  MixtureSnapshot snap;
  ControllerOutput ctrl;
  StateVector deriv{};
};

/// Evaluates every algebraic reconstruction, the controller and the time
/// derivatives of [M_s, M_fl, q_p, xi_eq, H0, q_p_cmd, E_h, E_useful, E_elec].
///
/// Order: mixture -> resistance/static head -> controller -> algebraic flow
/// -> transport flows -> derivatives. Reconstructions use the protected
/// projection of the state so trial stages never see negative masses.
inline Evaluation evaluate(const ProcessState& raw, const ExogenousInputs& u, const Parameters& p,
                           const Holds& hold = {}) {
  if (auto bad = raw.first_non_finite(); !bad.empty()) {
    throw StateError("non-finite state member " + std::string(bad));
  }
  const ProcessState x = apply_protections(raw, p).state;
  Evaluation ev;
  MixtureSnapshot& m = ev.snap;

  m.C = consistency(x.M_s, x.M_fl, p.eps);
  const auto vol = phase_volumes(x.M_s, x.M_fl, p.rho_s, p.rho_fl, p.w);
  m.V_s = vol.V_s;
  m.V_fl = vol.V_fl;
  m.V = vol.V;
  m.M_total = vol.M_total;
  m.rho_mix = mixture_density(x.M_s, x.M_fl, p.rho_s, p.rho_fl, p.eps);
  m.C_n = hydraulic_resistance(m.C, p.K_ref, p.C_ref, p.alpha_C, p.eps);
  m.H_static = static_head(m.rho_mix, p.K_static);

  ev.ctrl = evaluate_controller(m.C, m.C_n, m.H_static, x.q_p, x.q_p_cmd, x.xi_eq, u.q_p_ref, p);
  const ControllerOutput& c = ev.ctrl;
  m.sigma_C = c.sigma_C;
  m.q_p_star = c.q_p_star;
  m.q_p_cmd = c.q_p_cmd;
  m.e_q = c.e_q;
  m.s_q = c.s_q;
  m.H_eq = c.H_eq;
  m.H_sw = c.H_sw;
  m.H0s = c.H0s;
  m.H0s_raw = c.H0s_raw;
  m.V_lyap = c.V;

  m.q_p_alg = algebraic_flow(x.H0, m.H_static, m.C_n, p.n, p.eps);
  m.f_s = fiber_flow(m.rho_mix, m.C, x.q_p);
  m.f_liq = liquor_flow(u.k_ch, u.gamma_K, m.C, m.rho_mix, x.q_p);

  m.gamma_dot = shear_rate(x.q_p, p.D_pipe);
  m.tau = hb_stress(m.gamma_dot, p.tau_y, p.K_HB, p.n);
  m.Phi_v = viscous_dissipation(m.tau, m.gamma_dot);

  m.P_h = hydraulic_power(x.H0, x.q_p);
  m.P_h_si = hydraulic_power_si(m.rho_mix, x.H0, x.q_p);
  m.P_useful = useful_power(m.H_static, x.q_p);
  m.P_elec = electrical_power(m.P_h, p.eta_pm);
  const auto eff = efficiency(m.P_useful, m.P_h, p.eps);
  m.eta_h = eff.value;
  m.eta_h_raw = eff.raw;
  m.eta_clamped = eff.clamped;

  const std::pair<std::string_view, double> checked[] = {
      {"C", m.C},           {"rho_mix", m.rho_mix}, {"C_n", m.C_n},     {"H_static", m.H_static},
      {"sigma_C", m.sigma_C}, {"s_q", m.s_q},       {"H_eq", m.H_eq},   {"H0s", m.H0s},
      {"q_p_alg", m.q_p_alg}, {"f_s", m.f_s},       {"f_liq", m.f_liq}, {"tau", m.tau},
      {"P_h", m.P_h},       {"P_elec", m.P_elec}};
  for (const auto& [name, v] : checked) {
    if (!std::isfinite(v)) throw StateError("non-finite intermediate " + std::string(name));
  }

  auto& d = ev.deriv;
  const bool pinned = hold.masses;
  d[0] = pinned ? 0.0 : -m.f_s;
  d[1] = pinned ? 0.0 : p.rho_fl * u.f_in - p.rho_fl * u.f_fl - m.f_liq;
  d[2] = flow_relaxation_rhs(m.q_p_alg, raw.q_p, p.tau_p);
  d[3] = integral_rate(c);
  d[4] = hold.head ? 0.0 : actuator_rhs(c.H0s, raw.H0, p.tau_H);
  d[5] = reference_conditioner_rhs(raw.q_p_cmd, c.q_p_star, p.tau_ref);
  d[6] = m.P_h;
  d[7] = m.P_useful;
  d[8] = m.P_elec;
  return ev;
}

}  // namespace digester

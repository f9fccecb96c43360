#pragma once

// Acceptance criteria for the closed-loop blowdown model, shared by the
// acceptance test binary and the `check` subcommand.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "digester/engine.hpp"
#include "digester/scenario_io.hpp"
#include "digester/verification.hpp"

namespace digester::acceptance {

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace tol {
inline constexpr double kInversionRel = 1e-12;
inline constexpr double kInversionSeconds = 1.0;
inline constexpr double kFrozenHead = 20.9526;
inline constexpr double kFrozenFlow = 1.3465e-4;
inline constexpr double kFrozenRel = 0.01;
inline constexpr double kFrozenTime = 600.0;
inline constexpr double kInsideFraction = 0.95;
inline constexpr double kReentrySeconds = 5000.0;
inline constexpr double kSteadyError = 1e-4;
inline constexpr double kTrackingSeconds = 10.0;
inline constexpr double kLyapunovFraction = 0.99;
inline constexpr double kMassRel = 1e-3;
inline constexpr double kC0 = 0.090909;
inline constexpr double kC0Abs = 1e-6;
inline constexpr double kRho0 = 1095.26;
inline constexpr double kRho0Abs = 0.01;
inline constexpr double kOracleHorizon = 5000.0;
inline constexpr double kOracleStep = 1.0;
inline constexpr double kOracleRel = 1e-4;
inline constexpr double kGuardSigmaAbs = 1e-12;
inline constexpr double kGuardCmdAbs = 1e-6;
inline constexpr double kEnergyRel = 5e-3;
inline constexpr int kRandomScenarios = 50;
inline constexpr double kFinIn = 5e-4;
}  // namespace tol

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Event instants of a schedule (breakpoints after t = 0 inside the horizon).
inline std::vector<double> events(const Scenario& s) {
  std::vector<double> out;
  for (const auto& b : s.schedule) {
    if (b.t > 0.0 && b.t < s.t_end) out.push_back(b.t);
  }
  return out;
}

inline bool all_finite(const Record& r) {
  const auto& m = r.snap;
  const double vals[] = {m.C,   m.rho_mix, m.V,     m.C_n,  m.H_static, m.q_p_alg, m.q_p_cmd, m.e_q,
                         m.s_q, m.sigma_C, m.H_eq,  m.H0s,  m.f_s,      m.f_liq,   m.gamma_dot, m.tau,
                         m.Phi_v, m.P_h,   m.P_useful, m.P_elec, m.eta_h, m.V_lyap, r.dVdt, r.t};
  return r.state.first_non_finite().empty() &&
         std::all_of(std::begin(vals), std::end(vals), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Everything derived from one run of the scenario under test.
struct RunContext {
  Scenario scenario;
  Trajectory traj;
  double seconds = 0.0;
};

inline RunContext run(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  RunContext ctx{s, integrate(s), 0.0};
  ctx.seconds = detail::seconds_since(t0);
  return ctx;
}

/// Randomized round trip through the equivalent head and the flow law.
/// Draws are uniform: C_n on [1, 1e6], n on [0.3, 1.5], q_cmd on (0, 0.004]
/// and H_static on [0, K_static * max(rho_s, rho_fl)], the static head of a
/// full single-phase column.
inline CriterionResult inversion_exactness(const Parameters& p, std::uint64_t seed = 20240611) {
  CriterionResult r{"1", "inversion exactness", false, ""};
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> resistance(1.0, 1.0e6);
  std::uniform_real_distribution<double> flow_index(0.3, 1.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double hs_max = p.K_static * std::max(p.rho_fl, p.rho_s);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double C_n = resistance(rng);
    const double n = flow_index(rng);
    const double q = 0.004 * (1.0 - unit(rng));  // (0, 0.004]
    const double H_static = hs_max * unit(rng);
    const double H = equivalent_head(H_static, C_n, q, n, p.eps);
    const double back = algebraic_flow(H, H_static, C_n, n, p.eps);
    worst = std::max(worst, std::abs(back - q) / q);
  }
  const double secs = detail::seconds_since(t0);
  r.passed = worst <= tol::kInversionRel && secs < tol::kInversionSeconds;
  r.detail = "max rel err " + detail::fmt(worst) + " over 1000 draws, " + detail::fmt(secs) + " s";
  return r;
}

/// Masses pinned at the reference consistency C = C_ref (so C_n = K_ref),
/// head held at 20.9526 m, flow released from rest.
inline Scenario frozen_plant_scenario(const Parameters& p) {
  Scenario s;
  s.parameters = p;
  s.schedule = {{0.0, ExogenousInputs{}}};
  const double M_s = 2500.0;
  s.initial_state = ProcessState{};
  s.initial_state.M_s = M_s;
  s.initial_state.M_fl = M_s * (1.0 - p.C_ref) / p.C_ref;
  s.initial_state.q_p = 0.0;
  s.initial_state.H0 = tol::kFrozenHead;
  s.hold.masses = true;
  s.hold.head = tol::kFrozenHead;
  s.t_end = tol::kFrozenTime;
  return s;
}

inline CriterionResult relaxation_fixed_point(const Parameters& p) {
  CriterionResult r{"2", "relaxation fixed point", false, ""};
  const auto traj = integrate(frozen_plant_scenario(p));
  const double q = traj.records.back().state.q_p;
  const double rel = std::abs(q - tol::kFrozenFlow) / tol::kFrozenFlow;
  r.passed = rel < tol::kFrozenRel;
  r.detail = "q_p(600 s) = " + detail::fmt(q) + ", rel dev " + detail::fmt(rel);
  return r;
}

inline CriterionResult closed_loop_tracking(const RunContext& ctx) {
  CriterionResult r{"3", "closed-loop tracking", false, ""};
  const auto& recs = ctx.traj.records;
  const auto& s = ctx.scenario;
  const double phi = s.parameters.phi_q;

  double inside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double dt = recs[i + 1].t - recs[i].t;
    total += dt;
    if (std::abs(recs[i].snap.s_q) <= phi) inside += dt;
  }
  const double fraction = total > 0.0 ? inside / total : 1.0;

  double worst_reentry = 0.0;
  for (double te : detail::events(s)) {
    double reentry = std::numeric_limits<double>::infinity();
    for (const auto& rec : recs) {
      if (rec.t >= te && std::abs(rec.snap.s_q) <= phi) {
        reentry = rec.t - te;
        break;
      }
    }
    worst_reentry = std::max(worst_reentry, reentry);
  }

  std::vector<double> starts{0.0};
  for (double te : detail::events(s)) starts.push_back(te);
  double steady = 0.0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const double lo = starts[k] + tol::kReentrySeconds;
    const double hi = k + 1 < starts.size() ? starts[k + 1] : s.t_end;
    for (const auto& rec : recs) {
      if (rec.t >= lo && rec.t < hi) steady = std::max(steady, std::abs(rec.snap.e_q));
    }
  }

  r.passed = fraction >= tol::kInsideFraction && worst_reentry <= tol::kReentrySeconds &&
             steady < tol::kSteadyError && ctx.seconds < tol::kTrackingSeconds;
  r.detail = "inside fraction " + detail::fmt(fraction) + ", worst re-entry " +
             detail::fmt(worst_reentry) + " s, steady |e_q| " + detail::fmt(steady) + ", run " +
             detail::fmt(ctx.seconds) + " s";
  return r;
}

inline CriterionResult lyapunov_decrease(const RunContext& ctx) {
  CriterionResult r{"4", "Lyapunov decrease", false, ""};
  const auto& recs = ctx.traj.records;
  const double phi = ctx.scenario.parameters.phi_q;
  std::vector<bool> excluded(recs.size(), false);
  for (double te : detail::events(ctx.scenario)) {
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (recs[i].t == te) {
        excluded[i] = true;
        if (i + 1 < recs.size()) excluded[i + 1] = true;
      }
    }
  }
  int samples = 0;
  int decreasing = 0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (excluded[i] || !(std::abs(recs[i].snap.s_q) > phi)) continue;
    ++samples;
    if (recs[i].dVdt < 0.0) ++decreasing;
  }
  const double fraction = samples > 0 ? static_cast<double>(decreasing) / samples : 1.0;
  r.passed = fraction >= tol::kLyapunovFraction;
  r.detail = std::to_string(decreasing) + "/" + std::to_string(samples) +
             " samples outside the boundary layer with dV/dt < 0" + (samples == 0 ? " (vacuous)" : "");
  return r;
}

struct MassBalance {
  double fiber_rel;
  double liquor_rel;
};

/// Trapezoidal transport integrals against the inventory change. Inputs
/// are piecewise constant, so their terms use the left record's values.
inline MassBalance mass_balance(const Trajectory& traj, const Parameters& p) {
  const auto& recs = traj.records;
  double fiber = 0.0;
  double liquor = 0.0;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double dt = recs[i + 1].t - recs[i].t;
    const auto& a = recs[i];
    const auto& b = recs[i + 1];
    fiber += 0.5 * dt * (a.snap.f_s + b.snap.f_s);
    liquor += 0.5 * dt * (a.snap.f_liq + b.snap.f_liq) +
              dt * p.rho_fl * (a.inputs.f_fl - a.inputs.f_in);
  }
  const auto& x0 = recs.front().state;
  const auto& xT = recs.back().state;
  return {std::abs(x0.M_s - xT.M_s - fiber) / x0.M_s, std::abs(x0.M_fl - xT.M_fl - liquor) / x0.M_fl};
}

inline CriterionResult mass_accounting(const RunContext& ctx) {
  CriterionResult r{"5", "mass accounting", false, ""};
  const auto mb = mass_balance(ctx.traj, ctx.scenario.parameters);
  r.passed = mb.fiber_rel < tol::kMassRel && mb.liquor_rel < tol::kMassRel;
  r.detail = "fiber " + detail::fmt(mb.fiber_rel) + ", liquor " + detail::fmt(mb.liquor_rel);
  return r;
}

inline CriterionResult initial_reconstruction(const RunContext& ctx) {
  CriterionResult r{"6", "initial reconstructions", false, ""};
  const auto& m = ctx.traj.records.front().snap;
  r.passed = std::abs(m.C - tol::kC0) <= tol::kC0Abs && std::abs(m.rho_mix - tol::kRho0) <= tol::kRho0Abs;
  r.detail = "C(0) = " + detail::fmt(m.C) + ", rho_mix(0) = " + detail::fmt(m.rho_mix);
  return r;
}

inline CriterionResult oracle_equivalence(const Scenario& base) {
  CriterionResult r{"7", "oracle integrator equivalence", false, ""};
  Scenario s = base;
  s.t_end = std::min(base.t_end, tol::kOracleHorizon);
  const auto adaptive = integrate(s);
  const auto reference = integrate_rk4(s, tol::kOracleStep);
  double worst_q = 0.0;
  double worst_c = 0.0;
  for (std::size_t i = 0; i < adaptive.records.size() && i < reference.records.size(); ++i) {
    const auto& a = adaptive.records[i];
    const auto& b = reference.records[i];
    auto rel = [](double x, double y) { return y == 0.0 ? std::abs(x) : std::abs(x - y) / std::abs(y); };
    worst_q = std::max(worst_q, rel(a.state.q_p, b.state.q_p));
    worst_c = std::max(worst_c, rel(a.snap.C, b.snap.C));
  }
  r.passed = adaptive.records.size() == reference.records.size() && worst_q < tol::kOracleRel &&
             worst_c < tol::kOracleRel;
  r.detail = "max rel dev q_p " + detail::fmt(worst_q) + ", C " + detail::fmt(worst_c);
  return r;
}

/// Masses pinned so that the regularized consistency equals C_max; the
/// conditioned command starts from zero.
inline Scenario guard_scenario(const Parameters& p, const ExogenousInputs& u) {
  Scenario s;
  s.parameters = p;
  s.schedule = {{0.0, u}};
  const double M_s = 3000.0;
  s.initial_state = ProcessState{};
  s.initial_state.M_s = M_s;
  s.initial_state.M_fl = M_s * (1.0 - p.C_max) / p.C_max - p.eps;
  s.initial_state.q_p = 0.0;
  s.initial_state.H0 = 0.0;
  s.initial_state.q_p_cmd = 0.0;
  s.hold.masses = true;
  s.t_end = 20.0 * p.tau_ref;
  return s;
}

inline CriterionResult supervisory_guard(const Parameters& p, const ExogenousInputs& u) {
  CriterionResult r{"8", "supervisory guard", false, ""};
  const auto traj = integrate(guard_scenario(p, u));
  const auto& last = traj.records.back();
  const double sigma_err = std::abs(last.snap.sigma_C - 0.5);
  const double cmd_err = std::abs(last.state.q_p_cmd - 0.5 * u.q_p_ref);
  r.passed = sigma_err <= tol::kGuardSigmaAbs && cmd_err <= tol::kGuardCmdAbs;
  r.detail = "|sigma_C - 0.5| = " + detail::fmt(sigma_err) + ", |q_p_cmd - q_p_ref/2| = " + detail::fmt(cmd_err);
  return r;
}

struct EnergyCheck {
  double worst_rel = 0.0;
  std::size_t ordering_violations = 0;
};

inline EnergyCheck energy_check(const Trajectory& traj) {
  const auto& recs = traj.records;
  double Eh = 0.0, Eu = 0.0, Ee = 0.0;
  EnergyCheck out;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double dt = recs[i + 1].t - recs[i].t;
    Eh += 0.5 * dt * (recs[i].snap.P_h + recs[i + 1].snap.P_h);
    Eu += 0.5 * dt * (recs[i].snap.P_useful + recs[i + 1].snap.P_useful);
    Ee += 0.5 * dt * (recs[i].snap.P_elec + recs[i + 1].snap.P_elec);
  }
  const auto& x0 = recs.front().state;
  const auto& xT = recs.back().state;
  auto rel = [](double q, double trap) { return trap == 0.0 ? std::abs(q) : std::abs(q - trap) / std::abs(trap); };
  out.worst_rel = std::max({rel(xT.E_h - x0.E_h, Eh), rel(xT.E_useful - x0.E_useful, Eu),
                            rel(xT.E_elec - x0.E_elec, Ee)});
  for (const auto& rec : recs) {
    if (rec.state.H0 >= rec.snap.H_static) {
      const auto& m = rec.snap;
      if (!(m.P_elec >= m.P_h && m.P_h >= m.P_useful && m.P_useful >= 0.0)) ++out.ordering_violations;
    }
  }
  return out;
}

inline CriterionResult energy_quadrature(const RunContext& ctx) {
  CriterionResult r{"9", "energy quadrature", false, ""};
  const auto e = energy_check(ctx.traj);
  r.passed = e.worst_rel < tol::kEnergyRel && e.ordering_violations == 0;
  r.detail = "max rel dev " + detail::fmt(e.worst_rel) + ", ordering violations " +
             std::to_string(e.ordering_violations);
  return r;
}

/// Randomized disturbance schedules on the reference event grid.
inline std::vector<Scenario> random_scenarios(const Scenario& base, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Scenario> out;
  for (int k = 0; k < count; ++k) {
    Scenario s = base;
    s.schedule.clear();
    for (double t : {0.0, 2.0e4, 5.0e4, 6.0e4}) {
      ExogenousInputs u = base.schedule.front().inputs;
      u.k_ch = unit(rng);
      u.gamma_K = unit(rng);
      u.f_in = tol::kFinIn * unit(rng);
      s.schedule.push_back({t, u});
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline CriterionResult boundedness(const Scenario& base) {
  CriterionResult r{"10", "boundedness and finiteness", false, ""};
  const auto scenarios = random_scenarios(base, tol::kRandomScenarios, 7);
  std::vector<std::future<std::string>> jobs;
  for (const auto& s : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&s]() -> std::string {
      try {
        const auto traj = integrate(s);
        for (const auto& rec : traj.records) {
          if (!detail::all_finite(rec)) return "non-finite record at t = " + detail::fmt(rec.t);
          const auto& x = rec.state;
          if (x.q_p < 0.0 || x.q_p > s.parameters.q_p_max) return "q_p out of bounds";
          if (x.H0 < 0.0 || x.H0 > s.parameters.H0_max) return "H0 out of bounds";
        }
        return {};
      } catch (const std::exception& e) {
        return e.what();
      }
    }));
  }
  int failures = 0;
  std::string first;
  for (auto& j : jobs) {
    auto msg = j.get();
    if (!msg.empty()) {
      if (failures++ == 0) first = msg;
    }
  }
  r.passed = failures == 0;
  r.detail = std::to_string(scenarios.size() - static_cast<std::size_t>(failures)) + "/" +
             std::to_string(scenarios.size()) + " scenarios bounded" + (first.empty() ? "" : "; first failure: " + first);
  return r;
}

inline CriterionResult determinism(const RunContext& ctx) {
  CriterionResult r{"11", "determinism", false, ""};
  const auto again = integrate(ctx.scenario);
  r.passed = trajectory_csv(ctx.traj) == trajectory_csv(again);
  r.detail = r.passed ? "repeat run is byte-identical" : "repeat run differs";
  return r;
}

inline CriterionResult gain_condition(const RunContext& ctx) {
  CriterionResult r{"G", "reaching gain condition", false, ""};
  const auto t = ctx.traj.times();
  const auto s = ctx.traj.column([](const Record& rec) { return rec.snap.s_q; });
  const auto g = gain_check(t, s, ctx.scenario.parameters);
  r.passed = g.satisfied;
  r.detail = "k_smc " + detail::fmt(g.k_smc) + " vs tau_p*delta_max " + detail::fmt(g.tau_p * g.delta_max) +
             " (" + GainCheck::kNote + ")";
  return r;
}

/// Every criterion against one scenario. Criteria tied to a constructed
/// setup (1, 2, 8, 10) reuse the scenario's parameters.
inline std::vector<CriterionResult> run_all(const Scenario& s) {
  const RunContext ctx = run(s);
  return {inversion_exactness(s.parameters),
          relaxation_fixed_point(s.parameters),
          closed_loop_tracking(ctx),
          lyapunov_decrease(ctx),
          mass_accounting(ctx),
          initial_reconstruction(ctx),
          oracle_equivalence(s),
          supervisory_guard(s.parameters, s.schedule.front().inputs),
          energy_quadrature(ctx),
          boundedness(s),
          determinism(ctx),
          gain_condition(ctx)};
}

}  // namespace digester::acceptance

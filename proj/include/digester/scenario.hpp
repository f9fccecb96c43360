#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "digester/core_state.hpp"
#include "digester/errors.hpp"
#include "digester/hydraulics.hpp"
#include "digester/rheology.hpp"
#include "digester/smc.hpp"

namespace digester {

/// Inputs that take effect at time t and hold until the next breakpoint.
struct Breakpoint {
  double t = 0.0;
  ExogenousInputs inputs;
};

using InputSchedule = std::vector<Breakpoint>;

struct Tolerances {
  double rel = 1e-6;
  double abs = 1e-9;
};

enum class Method { kRosenbrock23, kDormandPrince54 };

/// Test hooks that freeze parts of the plant. Pinned masses keep C and
/// rho_mix constant; a held head replaces the actuator with a fixed H0.
struct Holds {
  bool masses = false;
  std::optional<double> head;
};

struct Scenario {
  Parameters parameters;
  ProcessState initial_state;
  InputSchedule schedule;
  double t_end = 1.0e5;
  double log_interval = 50.0;
  Tolerances tolerances;
  Method method = Method::kRosenbrock23;
  Holds hold;
};

/// The three reference disturbances: channeling 0.50 -> 0.80 at 2e4 s,
/// drainability 0.20 -> 0.50 at 5e4 s, dilution 1.0e-4 -> 1.5e-4 at 6e4 s.
inline InputSchedule reference_schedule() {
  ExogenousInputs u;
  InputSchedule s{{0.0, u}};
  u.k_ch = 0.80;
  s.push_back({2.0e4, u});
  u.gamma_K = 0.50;
  s.push_back({5.0e4, u});
  u.f_in = 1.5e-4;
  s.push_back({6.0e4, u});
  return s;
}

/// Steady operating point for the given masses: the flow equals the
/// protected reference and the head equals the equivalent head.
inline ProcessState operating_point(const Parameters& p, double M_s, double M_fl,
                                    const ExogenousInputs& u) {
  ProcessState x;
  x.M_s = M_s;
  x.M_fl = M_fl;
  const double C = consistency(M_s, M_fl, p.eps);
  const double rho = mixture_density(M_s, M_fl, p.rho_s, p.rho_fl, p.eps);
  const double C_n = hydraulic_resistance(C, p.K_ref, p.C_ref, p.alpha_C, p.eps);
  const double H_static = static_head(rho, p.K_static);
  const double q = protected_reference(consistency_guard(C, p.C_max, p.alpha_sig), u.q_p_ref);
  x.q_p = q;
  x.q_p_cmd = q;
  x.H0 = std::min(equivalent_head(H_static, C_n, q, p.n, p.eps), p.H0_max);
  return x;
}

inline Scenario default_scenario() {
  Scenario s;
  s.schedule = reference_schedule();
  s.initial_state = operating_point(s.parameters, 2500.0, 25000.0, s.schedule.front().inputs);
  return s;
}

inline const ExogenousInputs& inputs_at(const InputSchedule& schedule, double t) {
  if (schedule.empty() || t < schedule.front().t) {
    throw DomainError("time precedes the first input breakpoint");
  }
  std::size_t i = 0;
  while (i + 1 < schedule.size() && schedule[i + 1].t <= t) ++i;
  return schedule[i].inputs;
}

/// Structural checks beyond the per-type ranges.
inline std::vector<Violation> check(const Scenario& s) {
  std::vector<Violation> out;
  for (const auto& v : check(s.parameters)) out.push_back({"parameters." + v.field, v.message});
  if (s.schedule.empty() || s.schedule.front().t != 0.0) {
    out.push_back({"schedule", "first breakpoint must be at t = 0"});
  }
  for (std::size_t i = 0; i < s.schedule.size(); ++i) {
    const std::string at = "schedule[" + std::to_string(i) + "]";
    if (i > 0 && !(s.schedule[i].t > s.schedule[i - 1].t)) {
      out.push_back({at + ".t", "breakpoint times must be strictly increasing"});
    }
    for (const auto& v : check(s.schedule[i].inputs, s.parameters)) {
      out.push_back({at + "." + v.field, v.message});
    }
  }
  if (!(std::isfinite(s.t_end) && s.t_end >= 0.0)) out.push_back({"t_end", "must be >= 0"});
  if (!(std::isfinite(s.log_interval) && s.log_interval > 0.0)) {
    out.push_back({"log_interval", "must be > 0"});
  }
  if (!(s.tolerances.rel > 0.0)) out.push_back({"tolerances.rel", "must be > 0"});
  if (!(s.tolerances.abs > 0.0)) out.push_back({"tolerances.abs", "must be > 0"});
  if (auto bad = s.initial_state.first_non_finite(); !bad.empty()) {
    out.push_back({"initial_state." + std::string(bad), "must be finite"});
  }
  if (s.initial_state.M_s < 0.0) out.push_back({"initial_state.M_s", "must be >= 0"});
  if (s.initial_state.M_fl < 0.0) out.push_back({"initial_state.M_fl", "must be >= 0"});
  if (s.hold.head && !(*s.hold.head >= 0.0 && *s.hold.head <= s.parameters.H0_max)) {
    out.push_back({"hold.head", "must be in [0, H0_max]"});
  }
  return out;
}

inline void validate(const Scenario& s) {
  if (auto v = check(s); !v.empty()) throw ParameterError(v.front().field + ": " + v.front().message);
}

}  // namespace digester

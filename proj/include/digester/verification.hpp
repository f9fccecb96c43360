#pragma once

// Fixed-step classical RK4 reference integrator. Shares only the model RHS
// with the adaptive engine; used as the oracle for integrator equivalence.

#include <cmath>
#include <cstdint>

#include "digester/engine.hpp"

namespace digester {

inline Trajectory integrate_rk4(const Scenario& s, double dt) {
  validate(s);
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  const Parameters& p = s.parameters;
  constexpr std::size_t N = ProcessState::kSize;

  auto first = apply_protections(s.initial_state, p);
  ProcessState x = first.state;
  if (s.hold.head) x.H0 = *s.hold.head;

  Trajectory traj;
  const auto times = log_times(s);
  traj.records.push_back(make_record(0.0, x, s, first.mask, nullptr));

  auto f = [&](const StateVector& y, const ExogenousInputs& u) {
    return evaluate(ProcessState::from_array(y), u, p, s.hold).deriv;
  };
  auto axpy = [](const StateVector& y, double a, const StateVector& k) {
    StateVector out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
    return out;
  };

  StateVector y = x.to_array();
  std::int64_t step = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    std::uint32_t mask = 0;
    // Step counts are integral so t stays an exact multiple of dt.
    const auto last = static_cast<std::int64_t>(std::llround(times[i] / dt));
    for (; step < last; ++step) {
      const ExogenousInputs& u = inputs_at(s.schedule, static_cast<double>(step) * dt);
      const auto k1 = f(y, u);
      const auto k2 = f(axpy(y, 0.5 * dt, k1), u);
      const auto k3 = f(axpy(y, 0.5 * dt, k2), u);
      const auto k4 = f(axpy(y, dt, k3), u);
      for (std::size_t j = 0; j < N; ++j) y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      auto pr = apply_protections(ProcessState::from_array(y), p);
      mask |= pr.mask;
      y = pr.state.to_array();
    }
    traj.records.push_back(make_record(times[i], ProcessState::from_array(y), s, mask, &traj.records.back()));
  }
  return traj;
}

}  // namespace digester

#pragma once

// Event-aligned adaptive integration of a Scenario into a Trajectory.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "digester/integrators.hpp"
#include "digester/model.hpp"
#include "digester/scenario.hpp"

namespace digester {

struct Record {
  double t = 0.0;
  ProcessState state;
  MixtureSnapshot snap;
  ExogenousInputs inputs;
  std::uint32_t protection_mask = 0;  ///< protections fired since the previous record
  double dVdt = 0.0;                  ///< backward-difference Lyapunov rate
};

struct Trajectory {
  std::vector<Record> records;

  [[nodiscard]] std::vector<double> times() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.t);
    return out;
  }

  template <class Get>
  [[nodiscard]] std::vector<double> column(Get&& get) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(get(r));
    return out;
  }
};

/// Multiples of the log interval below t_end, every breakpoint inside the
/// horizon, and t_end itself; sorted and unique.
inline std::vector<double> log_times(const Scenario& s) {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * s.log_interval;
    if (!(t < s.t_end)) break;
    out.push_back(t);
  }
  for (const auto& b : s.schedule) {
    if (b.t > 0.0 && b.t < s.t_end) out.push_back(b.t);
  }
  out.push_back(s.t_end);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Record make_record(double t, const ProcessState& x, const Scenario& s, std::uint32_t mask,
                          const Record* prev) {
  Record r;
  r.t = t;
  r.state = x;
  r.inputs = inputs_at(s.schedule, t);
  r.snap = evaluate(x, r.inputs, s.parameters, s.hold).snap;
  r.protection_mask = mask;
  if (prev != nullptr) {
    r.dVdt = lyapunov_diagnostics(r.snap.s_q, prev->snap.s_q, t - prev->t).dVdt;
  }
  return r;
}

namespace detail {

template <class Scheme>
Trajectory run(const Scenario& s, Scheme scheme, double order) {
  constexpr std::size_t N = ProcessState::kSize;
  const Parameters& p = s.parameters;

  auto first = apply_protections(s.initial_state, p);
  ProcessState x = first.state;
  if (s.hold.head) x.H0 = *s.hold.head;

  Trajectory traj;
  const auto times = log_times(s);
  traj.records.reserve(times.size());
  traj.records.push_back(make_record(0.0, x, s, first.mask, nullptr));

  std::string last_failure;
  const ExogenousInputs* inputs = nullptr;
  auto rhs = [&](double, const ode::Vector<N>& y, ode::Vector<N>& dy) {
    try {
      dy = evaluate(ProcessState::from_array(y), *inputs, p, s.hold).deriv;
      return true;
    } catch (const StateError& e) {
      last_failure = e.what();
      return false;
    }
  };

  constexpr double kInitialStep = 1.0;
  constexpr int kMaxRejects = 60;
  double t = 0.0;
  double h_prop = kInitialStep;
  ode::Vector<N> y = x.to_array();

  for (std::size_t i = 1; i < times.size(); ++i) {
    const double target = times[i];
    inputs = &inputs_at(s.schedule, t);
    const bool at_breakpoint = std::any_of(s.schedule.begin(), s.schedule.end(),
                                           [t](const Breakpoint& b) { return b.t == t; });
    if (at_breakpoint) h_prop = kInitialStep;

    std::uint32_t mask = 0;
    int rejects = 0;
    while (t < target) {
      const double remaining = target - t;
      const bool clipped = remaining <= h_prop * (1.0 + 1e-9);
      const double h = clipped ? remaining : h_prop;
      ode::Vector<N> y_new;
      double err = 0.0;
      const bool ok = scheme.attempt(rhs, t, y, h, y_new, err);
      if (ok && err <= 1.0) {
        Protected pr;
        try {
          pr = apply_protections(ProcessState::from_array(y_new), p);
        } catch (const StateError& e) {
          throw NumericalError(e.what(), t + h, ProcessState::from_array(y));
        }
        mask |= pr.mask;
        y = pr.state.to_array();
        t = clipped ? target : t + h;
        const double proposal = ode::next_step(h, err, order);
        h_prop = clipped ? std::max(h_prop, proposal) : proposal;
        rejects = 0;
        continue;
      }
      h_prop = ok ? std::min(ode::next_step(h, err, order), 0.9 * h) : 0.25 * h;
      if (++rejects > kMaxRejects || h_prop < 1e-12 * std::max(1.0, std::abs(t))) {
        const std::string why = ok ? "step size underflow (error test)"
                                   : "step size underflow (" + last_failure + ")";
        throw NumericalError(why, t, ProcessState::from_array(y));
      }
    }
    traj.records.push_back(
        make_record(target, ProcessState::from_array(y), s, mask, &traj.records.back()));
  }
  return traj;
}

}  // namespace detail

/// Integrates the scenario with restarts at every input breakpoint and
/// protections after every accepted step. Deterministic: no state is
/// shared between calls.
inline Trajectory integrate(const Scenario& s) {
  validate(s);
  constexpr std::size_t N = ProcessState::kSize;
  switch (s.method) {
    case Method::kDormandPrince54:
      return detail::run(s, ode::DormandPrince54<N>(s.tolerances.rel, s.tolerances.abs),
                         ode::DormandPrince54<N>::kOrder);
    case Method::kRosenbrock23:
    default:
      return detail::run(s, ode::Rosenbrock23<N>(s.tolerances.rel, s.tolerances.abs),
                         ode::Rosenbrock23<N>::kOrder);
  }
}

}  // namespace digester

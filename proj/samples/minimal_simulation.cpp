// Runs the reference disturbance scenario and prints a coarse summary.

#include <cstdio>

#include "digester/digester.hpp"

int main() {
  const auto scenario = digester::default_scenario();
  const auto traj = digester::integrate(scenario);
  std::printf("%10s %10s %12s %12s %10s %10s\n", "t [s]", "C", "q_p", "s_q", "H0", "H_eq");
  for (const auto& r : traj.records) {
    if (static_cast<long>(r.t) % 10000 != 0) continue;
    std::printf("%10.0f %10.5f %12.5e %12.4e %10.3f %10.3f\n", r.t, r.snap.C, r.state.q_p, r.snap.s_q,
                r.state.H0, r.snap.H_eq);
  }
  return 0;
}

#pragma once

// Concurrent parameter sweeps: one scenario per value, one output directory
// per run, no shared mutable state between runs.

#include <cstdio>
#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include "digester/engine.hpp"
#include "digester/scenario_io.hpp"

namespace digester {

struct SweepRun {
  double value = 0.0;
  std::filesystem::path directory;
  bool ok = false;
  bool numerical_failure = false;
  std::string message;
};

inline std::vector<SweepRun> run_sweep(const std::string& document, const std::string& param_path,
                                       const std::vector<double>& values,
                                       const std::filesystem::path& out_dir) {
  // Parse every variant up front so document errors surface before any run.
  std::vector<Scenario> scenarios;
  scenarios.reserve(values.size());
  for (double v : values) scenarios.push_back(parse_scenario(override_document(document, param_path, v)));

  std::vector<std::future<SweepRun>> jobs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    const auto dir = out_dir / name;
    jobs.push_back(std::async(std::launch::async, [&scenarios, i, dir, v = values[i]] {
      SweepRun run{v, dir, false, false, {}};
      try {
        std::filesystem::create_directories(dir);
        write_trajectory(integrate(scenarios[i]), (dir / "trajectory.csv").string());
        run.ok = true;
      } catch (const NumericalError& e) {
        run.numerical_failure = true;
        run.message = e.what();
      } catch (const std::exception& e) {
        run.message = e.what();
      }
      return run;
    }));
  }
  std::vector<SweepRun> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace digester

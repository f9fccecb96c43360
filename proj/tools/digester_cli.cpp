// digester: command-line front end for the blowdown simulator.
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
// 3 acceptance failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "digester/acceptance.hpp"
#include "digester/digester.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;
constexpr int kAcceptance = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw digester::ScenarioError(digester::ScenarioError::Kind::kSyntax, "", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::optional<double> t_end, rtol, atol, log_every;
};

int simulate(const SimulateArgs& a) {
  auto s = digester::parse_scenario(read_file(a.scenario));
  if (a.t_end) s.t_end = *a.t_end;
  if (a.rtol) s.tolerances.rel = *a.rtol;
  if (a.atol) s.tolerances.abs = *a.atol;
  if (a.log_every) s.log_interval = *a.log_every;
  digester::validate(s);
  const auto traj = digester::integrate(s);
  std::filesystem::create_directories(a.out);
  const auto path = std::filesystem::path(a.out) / "trajectory.csv";
  digester::write_trajectory(traj, path.string());
  std::cout << "wrote " << traj.records.size() << " records to " << path.string() << '\n';
  return kOk;
}

int check(const std::string& scenario_path) {
  const auto s = digester::parse_scenario(read_file(scenario_path));
  const auto results = digester::acceptance::run_all(s);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kAcceptance;
}

struct ManifoldArgs {
  std::string out;
  std::optional<std::string> scenario;
  std::pair<double, double> e_range{-1e-3, 1e-3};
  std::pair<double, double> xi_range{-10.0, 10.0};
  std::size_t steps = 41;
};

int manifold(const ManifoldArgs& a) {
  digester::Parameters p;
  if (a.scenario) p = digester::parse_scenario(read_file(*a.scenario)).parameters;
  const auto grid = digester::manifold_grid({a.e_range.first, a.e_range.second},
                                            {a.xi_range.first, a.xi_range.second}, p.lambda_q, a.steps);
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw digester::Error("cannot write " + a.out);
  digester::write_manifold(grid, out);
  std::cout << "wrote " << grid.s.size() << " grid cells to " << a.out << '\n';
  return kOk;
}

struct SweepArgs {
  std::string scenario;
  std::string param;
  std::vector<double> values;
  std::string out;
};

int sweep(const SweepArgs& a) {
  const auto runs = digester::run_sweep(read_file(a.scenario), a.param, a.values, a.out);
  int code = kOk;
  for (const auto& r : runs) {
    std::cout << a.param << " = " << r.value << " -> " << r.directory.string() << ": "
              << (r.ok ? "ok" : r.message) << '\n';
    if (r.numerical_failure) {
      code = kNumerical;
    } else if (!r.ok && code == kOk) {
      code = kUsage;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch-digester blowdown simulator with sliding-mode discharge control"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Integrate one scenario and write trajectory.csv");
  sim_cmd->add_option("--scenario", sim.scenario, "Scenario document")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--t-end", sim.t_end, "Horizon [s]");
  sim_cmd->add_option("--rtol", sim.rtol, "Relative tolerance");
  sim_cmd->add_option("--atol", sim.atol, "Absolute tolerance");
  sim_cmd->add_option("--log-every", sim.log_every, "Log interval [s]");

  std::string check_scenario;
  auto* check_cmd = app.add_subcommand("check", "Run the acceptance criteria against a scenario");
  check_cmd->add_option("--scenario", check_scenario, "Scenario document")->required()->check(CLI::ExistingFile);

  ManifoldArgs man;
  auto* man_cmd = app.add_subcommand("manifold", "Emit the sliding-manifold grid as CSV");
  man_cmd->add_option("--out", man.out, "Output CSV file")->required();
  man_cmd->add_option("--scenario", man.scenario, "Take lambda_q from this scenario")->check(CLI::ExistingFile);
  man_cmd->add_option("--e-range", man.e_range, "Tracking-error range [m^3/s]");
  man_cmd->add_option("--xi-range", man.xi_range, "Integral-state range [m^3]");
  man_cmd->add_option("--steps", man.steps, "Points per axis")->check(CLI::Range(2, 100000));

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run concurrent variants of one parameter");
  sweep_cmd->add_option("--scenario", sw.scenario, "Base scenario document")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--param", sw.param, "Dotted document path, e.g. parameters.k_smc")->required();
  sweep_cmd->add_option("--values", sw.values, "Comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", sw.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (*sim_cmd) return simulate(sim);
    if (*check_cmd) return check(check_scenario);
    if (*man_cmd) return manifold(man);
    if (*sweep_cmd) return sweep(sw);
  } catch (const digester::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const digester::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "digester/digester.hpp"

namespace digester {
namespace {

ScenarioError::Kind error_kind(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "document parsed: " << doc;
  return ScenarioError::Kind::kSyntax;
}

TEST(ParseScenario, EmptyDocumentIsDefault) {
  const auto s = parse_scenario("");
  const auto d = default_scenario();
  EXPECT_EQ(s.initial_state, d.initial_state);
  EXPECT_EQ(s.schedule.size(), d.schedule.size());
  EXPECT_EQ(s.parameters.k_smc, d.parameters.k_smc);
  EXPECT_EQ(s.t_end, d.t_end);
  EXPECT_EQ(parse_scenario("// nothing here\n{}").initial_state, d.initial_state);
}

TEST(ParseScenario, ShippedFileMatchesDefault) {
  const auto s = load_scenario(DIGESTER_SOURCE_DIR "/scenarios/default.jsonc");
  const auto d = default_scenario();
  EXPECT_EQ(s.initial_state, d.initial_state);
  ASSERT_EQ(s.schedule.size(), 4u);
  EXPECT_EQ(s.schedule[1].t, 2.0e4);
  EXPECT_EQ(s.schedule[1].inputs.k_ch, 0.80);
  EXPECT_EQ(s.schedule[2].t, 5.0e4);
  EXPECT_EQ(s.schedule[2].inputs.gamma_K, 0.50);
  EXPECT_EQ(s.schedule[2].inputs.k_ch, 0.80);
  EXPECT_EQ(s.schedule[3].t, 6.0e4);
  EXPECT_EQ(s.schedule[3].inputs.f_in, 1.5e-4);
}

TEST(ParseScenario, Overrides) {
  const auto s = parse_scenario(R"({"parameters": {"k_smc": 3, "tau_p": 60}})");
  EXPECT_EQ(s.parameters.k_smc, 3.0);
  EXPECT_EQ(s.parameters.tau_p, 60.0);
  EXPECT_EQ(s.parameters.n, Parameters{}.n);
}

TEST(ParseScenario, InvariantViolationNamesField) {
  try {
    parse_scenario(R"({"parameters": {"n": -1}})");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.kind(), ScenarioError::Kind::kInvariant);
    EXPECT_NE(e.path().find("n"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("invariant-violation"), std::string::npos);
  }
}

TEST(ParseScenario, ErrorKindsAreDistinct) {
  EXPECT_EQ(error_kind(R"({"parameters": {"k_smx": 3}})"), ScenarioError::Kind::kUnknownKey);
  EXPECT_EQ(error_kind(R"({"paramters": {}})"), ScenarioError::Kind::kUnknownKey);
  EXPECT_EQ(error_kind(R"({"parameters": {"n": 0.75,}})"), ScenarioError::Kind::kSyntax);
  EXPECT_EQ(error_kind(R"({"parameters": {"n": "fast"}})"), ScenarioError::Kind::kInvariant);
  EXPECT_EQ(error_kind(R"({"schedule": [{"t": 5}]})"), ScenarioError::Kind::kInvariant);
  EXPECT_EQ(error_kind(R"({"schedule": [{"t": 0}, {"t": 0}]})"), ScenarioError::Kind::kInvariant);
  EXPECT_EQ(error_kind(R"({"t_end": -1})"), ScenarioError::Kind::kInvariant);
}

TEST(OverrideDocument, SetsNestedAndIndexedPaths) {
  std::string doc = override_document("", "parameters.k_smc", 0.0);
  EXPECT_EQ(parse_scenario(doc).parameters.k_smc, 0.0);
  doc = override_document(R"({"schedule": [{"t": 0}, {"t": 100, "f_in": 0}]})", "schedule[1].f_in",
                          2e-4);
  EXPECT_EQ(parse_scenario(doc).schedule[1].inputs.f_in, 2e-4);
  EXPECT_THROW(override_document(R"({"schedule": [{"t": 0}]})", "schedule[3].t", 1.0), ScenarioError);
}

TEST(TrajectoryCsv, ZeroHorizonHasOneRow) {
  auto s = default_scenario();
  s.t_end = 0;
  std::istringstream in(trajectory_csv(integrate(s)));
  const auto t = read_csv(in);
  EXPECT_EQ(t.header, trajectory_columns());
  EXPECT_EQ(t.header.size(), 38u);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][t.index_of("M_s")], 2500.0);
}

TEST(TrajectoryCsv, RowsOnGridAndBreakpointsAndRoundTrip) {
  auto s = default_scenario();
  s.t_end = 6.5e4;
  s.log_interval = 1500;
  const std::string text = trajectory_csv(integrate(s));
  ASSERT_EQ(text.back(), '\n');
  std::istringstream in(text);
  const auto t = read_csv(in);
  std::vector<double> times;
  for (const auto& r : t.rows) times.push_back(r[0]);
  EXPECT_EQ(times[0], 0.0);
  EXPECT_EQ(times[1], 1500.0);
  for (double b : {2e4, 5e4, 6e4, 6.5e4}) {
    EXPECT_NE(std::find(times.begin(), times.end(), b), times.end()) << b;
  }
  EXPECT_EQ(write_csv(t), text);
}

TEST(TrajectoryCsv, UnwritableDestination) {
  auto s = default_scenario();
  s.t_end = 0;
  EXPECT_THROW(write_trajectory(integrate(s), std::string("/nonexistent-dir/x/trajectory.csv")), Error);
}

TEST(ManifoldCsv, HeaderAndCells) {
  std::ostringstream out;
  write_manifold(manifold_grid({-1e-3, 1e-3}, {-10, 10}, 1e-4, 3), out);
  std::istringstream in(out.str());
  const auto t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"e_q", "xi_eq", "s_q"}));
  ASSERT_EQ(t.rows.size(), 9u);
  EXPECT_EQ(t.rows[4][2], 0.0);
  EXPECT_NEAR(t.rows[8][2], 0.002, 1e-18);
}

TEST(Sweep, RunsEachValue) {
  const auto dir = std::filesystem::temp_directory_path() / "digester_sweep_test";
  std::filesystem::remove_all(dir);
  const std::string doc = R"({"t_end": 2000, "log_interval": 500})";
  const auto runs = run_sweep(doc, "parameters.k_smc", {1.0, 3.0, 5.0}, dir.string());
  ASSERT_EQ(runs.size(), 3u);
  for (const auto& r : runs) {
    EXPECT_TRUE(r.ok) << r.message;
    EXPECT_TRUE(std::filesystem::exists(r.directory / "trajectory.csv"));
  }
  EXPECT_THROW(run_sweep(doc, "parameters.n", {0.75, -1.0}, dir.string()), ScenarioError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace digester

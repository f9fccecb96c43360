#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "digester/scenario_io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + DIGESTER_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("digester_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateDefaultScenario) {
  const auto out = dir_ / "run";
  EXPECT_EQ(run("simulate --scenario " DIGESTER_SCENARIO " --out " + out.string()), 0);
  std::ifstream in(out / "trajectory.csv");
  const auto t = digester::read_csv(in);
  EXPECT_EQ(t.header, digester::trajectory_columns());
  EXPECT_EQ(t.rows.back()[0], 1e5);
}

TEST_F(Cli, SimulateOverrides) {
  const auto out = dir_ / "run";
  EXPECT_EQ(run("simulate --scenario " DIGESTER_SCENARIO " --out " + out.string() +
                " --t-end 1000 --log-every 250 --rtol 1e-7 --atol 1e-10"),
            0);
  std::ifstream in(out / "trajectory.csv");
  EXPECT_EQ(digester::read_csv(in).rows.size(), 5u);
}

TEST_F(Cli, ManifoldDefaultsHaveZeroAtOrigin) {
  const auto out = dir_ / "manifold.csv";
  ASSERT_EQ(run("manifold --out " + out.string()), 0);
  std::ifstream in(out);
  const auto t = digester::read_csv(in);
  ASSERT_EQ(t.rows.size(), 41u * 41u);
  bool found = false;
  for (const auto& r : t.rows) {
    if (r[0] == 0.0 && r[1] == 0.0) {
      EXPECT_EQ(r[2], 0.0);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(Cli, CheckFailsWithoutSwitchingGain) {
  const auto doc = write("no_gain.jsonc", R"({"parameters": {"k_smc": 0}})");
  EXPECT_EQ(run("check --scenario " + doc), 3);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("simulate --scenario " DIGESTER_SCENARIO " --out " + (dir_ / "x").string() + " --bogus"), 1);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("simulate --out " + (dir_ / "x").string()), 1);
  const auto bad = write("bad.jsonc", R"({"parameters": {"k_smx": 3}})");
  EXPECT_EQ(run("simulate --scenario " + bad + " --out " + (dir_ / "x").string()), 1);
}

TEST_F(Cli, NumericalFailureExitCode) {
  const auto out = dir_ / "run";
  EXPECT_EQ(run("simulate --scenario " DIGESTER_SCENARIO " --out " + out.string() +
                " --t-end 100 --rtol 1e-300 --atol 1e-300"),
            2);
}

TEST_F(Cli, SweepWritesOneDirectoryPerValue) {
  const auto doc = write("short.jsonc", R"({"t_end": 1000, "log_interval": 500})");
  EXPECT_EQ(run("sweep --scenario " + doc + " --param parameters.k_smc --values 1,3 --out " + dir_.string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "run_000" / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "run_001" / "trajectory.csv"));
}

}  // namespace

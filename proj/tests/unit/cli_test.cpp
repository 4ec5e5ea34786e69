// Copyright 2026 The safe_horizon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "safe_horizon/ellipse.hpp"
#include "safe_horizon/format.hpp"

namespace
{

namespace fs = std::filesystem;
namespace cli = safe_horizon::cli;

struct Result
{
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    ::unsetenv(cli::kOutputEnv);
    dir_ = fs::temp_directory_path() /
      ("safe_horizon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }

  void TearDown() override
  {
    ::unsetenv(cli::kOutputEnv);
    fs::remove_all(dir_);
  }

  Result run(std::initializer_list<std::string> args) const
  {
    std::vector<std::string> store{"safe_horizon"};
    store.insert(store.end(), args);
    std::vector<const char *> argv;
    for (const auto & a : store) {
      argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  static std::string slurp(const fs::path & p)
  {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  std::string out_dir() const {return dir_.string();}

  fs::path dir_;
};

const std::string kScenario = std::string(SAFE_HORIZON_SCENARIO_DIR) + "/outage_six_robots.ini";

TEST_F(CliTest, EllipseCircleRegime)
{
  const auto r = run({"ellipse", "--t", "10", "--out", out_dir()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "t,A,B\n10,0.01,0.01\n");
  EXPECT_EQ(slurp(dir_ / "ellipse_params.csv"), r.out);
  const auto ring = slurp(dir_ / "ellipse_boundary_t10.csv");
  EXPECT_EQ(ring.rfind("x,y\n", 0), 0u);
}

TEST_F(CliTest, EllipseMatchesLibrary)
{
  const auto r = run({"ellipse", "--t", "1", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto h = safe_horizon::ellipse::min_ellipse_params(1.0);
  EXPECT_EQ(r.out, "t,A,B\n1," + safe_horizon::format_number(h.a) + "," +
    safe_horizon::format_number(h.b) + "\n");
}

TEST_F(CliTest, EllipseMultipleTimes)
{
  const auto r = run({"ellipse", "--t", "0.5,2.5", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "ellipse_boundary_t0.5.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "ellipse_boundary_t2.5.csv"));
}

TEST_F(CliTest, BadTimeIsUsageError)
{
  EXPECT_EQ(run({"ellipse", "--t", "0", "--out", out_dir()}).code, 2);
  EXPECT_EQ(run({"ellipse", "--t", "-1", "--out", out_dir()}).code, 2);
  EXPECT_EQ(run({"ellipse", "--t", "abc", "--out", out_dir()}).code, 2);
  EXPECT_EQ(run({"ellipse", "--out", out_dir()}).code, 2);
  EXPECT_EQ(run({"hull", "--t", "nan", "--out", out_dir()}).code, 2);
}

TEST_F(CliTest, UsageErrors)
{
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"ellipse", "--t", "1", "--bogus"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, HullAndJaccard)
{
  const auto h = run({"hull", "--t", "1,3.14159265358979", "--out", out_dir()});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_NE(h.out.find("3.14159265,6.87794317,7.05089623"), std::string::npos) << h.out;
  EXPECT_TRUE(fs::exists(dir_ / "hull_boundary_t1.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "kset_boundary_t1.csv"));
  const auto j = run({"jaccard", "--out", out_dir()});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_NE(j.out.find("\n25,484.891904,488.847931,490.873852,0.00809255082,0.012186324\n"),
    std::string::npos) << j.out;
}

TEST_F(CliTest, SafetimeFromConfig)
{
  const auto r = run({"safetime", "--config", kScenario, "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("robot_id,horizon,quantized,limiting_neighbor,limiting_obstacle\n", 0), 0u);
  EXPECT_EQ(slurp(dir_ / "safetime.csv"), r.out);
}

TEST_F(CliTest, SimulateReproduction)
{
  const auto r = run({"simulate", "--config", kScenario, "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("collisions: 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("robot 1 [3.1, 8.3): distance 2.9"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "sim_log.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "sim_summary.txt"));
}

TEST_F(CliTest, SimulateBaselineStopsDuringOutage)
{
  const auto r = run({"simulate", "--config", kScenario, "--baseline", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mode: baseline"), std::string::npos);
  EXPECT_NE(r.out.find("robot 1 [3.1, 8.3): distance 0,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("robot 4 [3.1, 8.3): distance 0,"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateErrors)
{
  EXPECT_EQ(run({"simulate", "--config", "/nonexistent.ini", "--out", out_dir()}).code, 2);
  fs::create_directories(dir_);
  const auto bad = dir_ / "bad.ini";
  std::ofstream(bad) << "[scenario]\nduration = soon\n";
  const auto r = run({"simulate", "--config", bad.string(), "--out", out_dir()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("scenario.duration"), std::string::npos) << r.err;
}

TEST_F(CliTest, GuardHoldsCloseHeadOnStart)
{
  // Robots start 0.3 apart facing each other with collision radius 0.29.
  fs::create_directories(dir_);
  const auto cfg = dir_ / "touch.ini";
  std::ofstream(cfg) << "[scenario]\nduration = 2\ncollision_radius = 0.29\n"
                        "[robot]\nstart = 0, 0, 0\ngoal = 5, 0\n"
                        "[robot]\nstart = 0.3, 0, 3.14159265\ngoal = -5, 0\n";
  const auto r = run({"simulate", "--config", cfg.string(), "--out", out_dir()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("collisions: 0\n"), std::string::npos);
}

TEST_F(CliTest, CollisionExitCode)
{
  fs::create_directories(dir_);
  const auto cfg = dir_ / "crash.ini";
  std::ofstream(cfg) << "[scenario]\nduration = 2\ncollision_radius = 0.1\n"
                        "[controller]\nguard = false\n"
                        "[robot]\nstart = 0, 0, 0\ngoal = 5, 0\n"
                        "[robot]\nstart = 1, 0, 3.14159265\ngoal = -5, 0\n";
  const auto r = run({"simulate", "--config", cfg.string(), "--out", out_dir()});
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_EQ(r.out.find("collisions: 0\n"), std::string::npos);
}

TEST_F(CliTest, OutputEnvOverridesFlag)
{
  const auto env_dir = dir_ / "from_env";
  ::setenv(cli::kOutputEnv, env_dir.string().c_str(), 1);
  const auto r = run({"ellipse", "--t", "2", "--out", (dir_ / "from_flag").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(env_dir / "ellipse_params.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "from_flag"));
}

TEST_F(CliTest, ByteIdenticalReruns)
{
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  ASSERT_EQ(run({"simulate", "--config", kScenario, "--seed", "9", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--config", kScenario, "--seed", "9", "--out", b.string()}).code, 0);
  EXPECT_EQ(slurp(a / "sim_log.csv"), slurp(b / "sim_log.csv"));
  EXPECT_EQ(slurp(a / "sim_summary.txt"), slurp(b / "sim_summary.txt"));
}

TEST_F(CliTest, VerifySuites)
{
  const auto e = run({"verify", "ellipse"});
  EXPECT_EQ(e.code, 0) << e.out;
  EXPECT_NE(e.out.find("verify: PASS"), std::string::npos);
  const auto j = run({"verify", "jaccard"});
  EXPECT_EQ(j.code, 0);
  EXPECT_NE(j.out.find("d_J(hull,xi) at t=25 measured=0.012186324 tolerance=0.02"),
    std::string::npos) << j.out;
  EXPECT_EQ(run({"verify", "nonsense"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
}

TEST_F(CliTest, VerifyFleetSafetyDeterministic)
{
  const auto a = run({"verify", "theorem3", "--runs", "5", "--seed", "7"});
  const auto b = run({"verify", "theorem3", "--runs", "5", "--seed", "7"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run({"verify", "theorem3", "--runs", "0"}).code, 2);
}

}  // namespace

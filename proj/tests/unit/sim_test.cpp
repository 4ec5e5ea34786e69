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

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "safe_horizon/ellipse.hpp"
#include "safe_horizon/sim/channel.hpp"
#include "safe_horizon/sim/decision_maker.hpp"
#include "safe_horizon/sim/packet.hpp"
#include "safe_horizon/sim/robot.hpp"
#include "safe_horizon/sim/scenarios.hpp"
#include "safe_horizon/sim/simulation.hpp"
#include "safe_horizon/unicycle.hpp"

namespace
{

using safe_horizon::integrate_pose;
using safe_horizon::kHalfPi;
using safe_horizon::kPi;
using safe_horizon::Pose;
using safe_horizon::Vec2;
using safe_horizon::VelocityCommand;
namespace sim = safe_horizon::sim;

TEST(Unicycle, ExactArcAndStraightLine)
{
  const Pose p = integrate_pose(Pose{0.0, 0.0, 0.0}, {1.0, 1.0}, kHalfPi);
  EXPECT_NEAR(p.position.x(), 1.0, 1e-15);
  EXPECT_NEAR(p.position.y(), 1.0, 1e-15);
  EXPECT_NEAR(p.heading, kHalfPi, 1e-15);
  const Pose q = integrate_pose(Pose{1.0, 2.0, kPi}, {0.5, 0.0}, 2.0);
  EXPECT_NEAR(q.position.x(), 0.0, 1e-15);
  EXPECT_NEAR(q.position.y(), 2.0, 1e-15);
  const Pose r = integrate_pose(Pose{0.0, 0.0, 0.0}, {0.0, -1.0}, 1.0);
  EXPECT_EQ(r.position, Vec2::Zero());
  EXPECT_NEAR(r.heading, -1.0, 1e-15);
  EXPECT_THROW(integrate_pose(Pose{}, {1.0, 0.0}, -0.1), std::invalid_argument);
}

TEST(Unicycle, HalfStepsCompose)
{
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const Pose p{sim::unit_draw(rng) * 4 - 2, sim::unit_draw(rng) * 4 - 2, sim::unit_draw(rng) * 6 - 3};
    const VelocityCommand c{sim::unit_draw(rng) * 2 - 1, sim::unit_draw(rng) * 2 - 1};
    const double dt = sim::unit_draw(rng);
    const Pose whole = integrate_pose(p, c, dt);
    const Pose halves = integrate_pose(integrate_pose(p, c, dt / 2), c, dt / 2);
    EXPECT_NEAR((whole.position - halves.position).norm(), 0.0, 1e-12);
    EXPECT_NEAR(std::remainder(whole.heading - halves.heading, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(RobotTick, StateMachine)
{
  auto s = sim::initial_robot_state(0, Pose{});
  EXPECT_EQ(s.mode, sim::Mode::kStopped);
  const sim::CommandPacket pkt{0, 3, {0.5, 0.1}, 0.3};
  s = sim::robot_tick(s, pkt, 3, 0.1);
  EXPECT_EQ(s.mode, sim::Mode::kCommanded);
  EXPECT_EQ(s.active, (VelocityCommand{0.5, 0.1}));
  EXPECT_EQ(s.last_cmd_tick, 3);
  // (k - l) * delta = 0.1, 0.2 < 0.3: keep going.
  s = sim::robot_tick(s, std::nullopt, 4, 0.1);
  EXPECT_EQ(s.mode, sim::Mode::kOpenLoop);
  s = sim::robot_tick(s, std::nullopt, 5, 0.1);
  EXPECT_EQ(s.mode, sim::Mode::kOpenLoop);
  EXPECT_EQ(s.active, (VelocityCommand{0.5, 0.1}));
  // 0.3 is not < 0.3: stop.
  s = sim::robot_tick(s, std::nullopt, 6, 0.1);
  EXPECT_EQ(s.mode, sim::Mode::kStopped);
  EXPECT_TRUE(s.active.is_zero());
  s = sim::robot_tick(s, sim::CommandPacket{0, 7, {1.0, 0.0}, 0.0}, 7, 0.1);
  EXPECT_EQ(s.mode, sim::Mode::kCommanded);
  s = sim::robot_tick(s, std::nullopt, 8, 0.1);
  EXPECT_EQ(s.mode, sim::Mode::kStopped);
}

TEST(ModeNames, Stable)
{
  EXPECT_EQ(sim::to_string(sim::Mode::kCommanded), "commanded");
  EXPECT_EQ(sim::to_string(sim::Mode::kOpenLoop), "open_loop");
  EXPECT_EQ(sim::to_string(sim::Mode::kStopped), "stopped");
}

TEST(Packet, RoundTrip)
{
  const sim::CommandPacket p{4, 123, {-0.25, 1.0}, 2.7};
  const auto wire = sim::encode_packet(p);
  EXPECT_EQ(wire, "SH1 4 123 -0.25 1 2.7\n");
  EXPECT_EQ(sim::decode_packet(wire), p);
  EXPECT_EQ(sim::decode_packet("SH1 4 123 -0.25 1 2.7"), p);
}

TEST(Packet, RejectsMalformed)
{
  EXPECT_THROW(sim::decode_packet("SH2 1 1 0 0 0"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 1 1 0 0"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 -1 1 0 0 0"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 1 x 0 0 0"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 1 1 1.5 0 0"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 1 1 0 0 -1"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 1 1 0 0 nan"), sim::PacketFormatError);
  EXPECT_THROW(sim::decode_packet("SH1 1 1 0 0 4", 3.0), sim::PacketFormatError);
  EXPECT_NO_THROW(sim::decode_packet("SH1 1 1 0 0 3", 3.0));
}

TEST(Channel, OutagesAndDrops)
{
  sim::FailureModel f;
  f.outages = {sim::Outage{1, 1.0, 2.0}};
  f.seed = 3;
  sim::Channel ch(f);
  const std::vector<sim::CommandPacket> pk{{0, 0, {}, 0.0}, {1, 0, {}, 0.0}};
  EXPECT_EQ(ch.deliver(pk, 0.5), (std::vector<bool>{true, true}));
  EXPECT_EQ(ch.deliver(pk, 1.0), (std::vector<bool>{true, false}));
  EXPECT_EQ(ch.deliver(pk, 1.99), (std::vector<bool>{true, false}));
  EXPECT_EQ(ch.deliver(pk, 2.0), (std::vector<bool>{true, true}));

  f.drop_probability = 1.0;
  sim::Channel dead(f);
  EXPECT_EQ(dead.deliver(pk, 0.0), (std::vector<bool>{false, false}));

  f.drop_probability = 1.5;
  EXPECT_THROW(sim::Channel{f}, std::invalid_argument);
}

TEST(Channel, DropRateAndStreamIndependentOfOutages)
{
  sim::FailureModel a;
  a.drop_probability = 0.5;
  a.seed = 11;
  sim::FailureModel b = a;
  b.outages = {sim::Outage{0, 0.0, 1.0}};
  sim::Channel ca(a);
  sim::Channel cb(b);
  const std::vector<sim::CommandPacket> pk{{0, 0, {}, 0.0}, {1, 0, {}, 0.0}};
  int delivered = 0;
  for (int k = 0; k < 4000; ++k) {
    const double t = 2.0 + k;
    const auto fa = ca.deliver(pk, t);
    const auto fb = cb.deliver(pk, t);
    EXPECT_EQ(fa, fb);
    delivered += fa[1] ? 1 : 0;
  }
  EXPECT_NEAR(delivered / 4000.0, 0.5, 0.03);
}

TEST(Quantize, WholePeriodsNotExceedingHorizon)
{
  EXPECT_NEAR(sim::quantize_horizon(0.35, 0.1), 0.3, 1e-12);
  EXPECT_LE(sim::quantize_horizon(0.35, 0.1), 0.35);
  EXPECT_NEAR(sim::quantize_horizon(0.3, 0.1), 0.3, 1e-12);
  EXPECT_LE(sim::quantize_horizon(0.3, 0.1), 0.3 * (1 + 1e-12));
  EXPECT_EQ(sim::quantize_horizon(0.05, 0.1), 0.0);
  EXPECT_EQ(sim::quantize_horizon(0.0, 0.1), 0.0);
  for (int k = 0; k < 1000; ++k) {
    const double h = 0.0037 * k;
    const double q = sim::quantize_horizon(h, 0.1);
    EXPECT_LE(q, h * (1 + 1e-12));
    EXPECT_GT(q, h - 0.1 - 1e-12);
  }
}

TEST(GoToGoal, ForwardOnlyAndBounded)
{
  const sim::ControllerParams p;
  const auto c = sim::go_to_goal(Pose{0.0, 0.0, 0.0}, Vec2{5.0, 0.0}, p);
  EXPECT_DOUBLE_EQ(c.linear, 1.0);
  EXPECT_DOUBLE_EQ(c.angular, 0.0);
  const auto behind = sim::go_to_goal(Pose{0.0, 0.0, 0.0}, Vec2{-5.0, 0.0}, p);
  EXPECT_DOUBLE_EQ(behind.linear, 0.0);
  EXPECT_DOUBLE_EQ(std::abs(behind.angular), 1.0);
  EXPECT_TRUE(sim::go_to_goal(Pose{0.0, 0.0, 0.0}, Vec2{0.01, 0.0}, p).is_zero());
}

TEST(DecisionMaker, BaselineSendsZeroHorizons)
{
  auto cfg = sim::outage_reproduction_config();
  cfg.baseline = true;
  std::vector<sim::RobotState> world;
  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    world.push_back(sim::initial_robot_state(static_cast<int>(i), cfg.robots[i].start));
  }
  for (const auto & p : sim::decision_maker_tick(world, cfg, 0)) {
    EXPECT_EQ(p.horizon, 0.0);
  }
  cfg.baseline = false;
  for (const auto & p : sim::decision_maker_tick(world, cfg, 0)) {
    EXPECT_GT(p.horizon, 0.0);
    EXPECT_LE(p.horizon, cfg.horizon_cap);
    const double periods = p.horizon / cfg.update_period;
    EXPECT_NEAR(periods, std::round(periods), 1e-9);
  }
}

TEST(DecisionMaker, GuardStopsHeadOnPair)
{
  sim::ScenarioConfig cfg;
  cfg.robots = {
    {Pose{0.0, 0.0, 0.0}, Vec2{5.0, 0.0}, {}},
    {Pose{0.2, 0.0, kPi}, Vec2{-5.0, 0.0}, {}},
  };
  std::vector<sim::RobotState> world{
    sim::initial_robot_state(0, cfg.robots[0].start),
    sim::initial_robot_state(1, cfg.robots[1].start)};
  const auto pk = sim::decision_maker_tick(world, cfg, 0);
  EXPECT_EQ(pk[0].command.linear, 0.0);
  EXPECT_EQ(pk[1].command.linear, 0.0);
}

TEST(Simulation, HeadOnPairNeverCollides)
{
  sim::ScenarioConfig cfg;
  cfg.duration = 8.0;
  cfg.collision_radius = 0.1;
  cfg.robots = {
    {Pose{0.0, 0.0, 0.0}, Vec2{6.0, 0.0}, {}},
    {Pose{6.0, 0.05, kPi}, Vec2{0.0, 0.05}, {}},
  };
  cfg.failure.outages = {sim::Outage{0, 1.0, 4.0}};
  const auto log = sim::run_scenario(cfg);
  EXPECT_EQ(log.summary.collisions, 0u);
  EXPECT_GT(log.summary.min_pair_distance, cfg.collision_radius);
}

TEST(Simulation, ModeTransitionsAreLegal)
{
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto cfg = sim::random_scenario(seed);
    const auto log = sim::run_scenario(cfg);
    for (const auto & tr : log.ticks) {
      if (tr.delivered) {
        EXPECT_EQ(tr.mode, sim::Mode::kCommanded);
        EXPECT_EQ(tr.last_cmd_tick, tr.tick);
      } else {
        EXPECT_NE(tr.mode, sim::Mode::kCommanded);
        const double elapsed = static_cast<double>(tr.tick - tr.last_cmd_tick) * cfg.update_period;
        EXPECT_EQ(tr.mode == sim::Mode::kOpenLoop, elapsed < tr.last_horizon);
      }
      if (cfg.failure.in_outage(tr.robot_id, tr.t)) {
        EXPECT_FALSE(tr.delivered);
      }
    }
  }
}

TEST(Simulation, RandomFleetsWithClearanceNeverTouch)
{
  sim::RandomScenarioOptions opt;
  opt.collision_radius = 0.15;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto cfg = sim::random_scenario(seed, opt);
    const auto log = sim::run_scenario(cfg);
    EXPECT_EQ(log.summary.collisions, 0u) << "seed " << seed;
    EXPECT_GT(log.summary.min_pair_distance, opt.collision_radius) << "seed " << seed;
  }
}

TEST(Simulation, GuardOffCanCollide)
{
  sim::ScenarioConfig cfg;
  cfg.duration = 2.0;
  cfg.collision_radius = 0.1;
  cfg.controller.guard = false;
  cfg.robots = {
    {Pose{0.0, 0.0, 0.0}, Vec2{5.0, 0.0}, {}},
    {Pose{1.0, 0.0, kPi}, Vec2{-5.0, 0.0}, {}},
  };
  EXPECT_GT(sim::run_scenario(cfg).summary.collisions, 0u);
}

TEST(Simulation, TrajectoriesStayInsideReachableEllipses)
{
  // Replay: from every tick pose, later logged positions of the same robot
  // lie inside the posed ellipse for the elapsed time.
  const auto cfg = sim::random_scenario(21);
  const auto log = sim::run_scenario(cfg);
  const std::size_t n = cfg.robots.size();
  const std::size_t per_tick = static_cast<std::size_t>(cfg.substeps_per_tick) * n;
  double worst = 0.0;
  for (const auto & tr : log.ticks) {
    const std::size_t first = static_cast<std::size_t>(tr.tick) * per_tick;
    for (std::size_t k = first + static_cast<std::size_t>(tr.robot_id); k < log.rows.size() &&
      log.rows[k].t <= tr.t + cfg.horizon_cap + 1e-9; k += n)
    {
      const double mu = log.rows[k].t - tr.t;
      if (mu < 1e-6) {
        continue;
      }
      const safe_horizon::ellipse::HorizonEllipse e(mu, tr.pose);
      worst = std::max(worst, e.membership(log.rows[k].pose.position));
    }
  }
  EXPECT_LE(worst, 1.0 + 1e-9);
}

TEST(Simulation, LogShapeAndCsv)
{
  const auto cfg = sim::outage_reproduction_config();
  const auto log = sim::run_scenario(cfg);
  const std::size_t n = cfg.robots.size();
  EXPECT_EQ(log.rows.size(),
    (static_cast<std::size_t>(cfg.tick_count() * cfg.substeps_per_tick) + 1) * n);
  EXPECT_EQ(log.ticks.size(), static_cast<std::size_t>(cfg.tick_count()) * n);
  const auto csv = sim::log_to_csv(log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), sim::kLogHeader);
  EXPECT_EQ(csv.find("nan"), std::string::npos);
}

TEST(Simulation, OutageReproduction)
{
  auto cfg = sim::outage_reproduction_config();
  const auto on = sim::run_scenario(cfg);
  cfg.baseline = true;
  const auto off = sim::run_scenario(cfg);
  EXPECT_EQ(on.summary.collisions, 0u);
  EXPECT_EQ(off.summary.collisions, 0u);
  ASSERT_EQ(on.summary.outage_travel.size(), 2u);
  for (const auto & o : on.summary.outage_travel) {
    EXPECT_GT(o.distance, 0.0);
    EXPECT_LT(o.last_motion, o.end);
  }
  for (const auto & o : off.summary.outage_travel) {
    EXPECT_EQ(o.distance, 0.0);
  }
  // Baseline: outage robots stop at the first missed tick (t = 3.1).
  bool found = false;
  for (const auto & iv : off.summary.stop_intervals) {
    if (iv.robot_id == 1 && iv.start > 3.0) {
      EXPECT_NEAR(iv.start, 3.1, 1e-9);
      EXPECT_NEAR(iv.end, 8.3, 1e-9);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Simulation, ValidatesConfig)
{
  sim::ScenarioConfig cfg;
  EXPECT_THROW(sim::run_scenario(cfg), sim::ConfigError);
}

}  // namespace

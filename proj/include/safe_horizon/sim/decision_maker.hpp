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

#ifndef SAFE_HORIZON__SIM__DECISION_MAKER_HPP_
#define SAFE_HORIZON__SIM__DECISION_MAKER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "safe_horizon/horizon.hpp"
#include "safe_horizon/sim/packet.hpp"
#include "safe_horizon/sim/robot.hpp"
#include "safe_horizon/sim/scenario.hpp"
#include "safe_horizon/unicycle.hpp"

namespace safe_horizon::sim
{

/// Nominal (unguarded) command for robot `index` at `pose` heading to `goal`.
using NominalController =
  std::function<VelocityCommand(std::size_t index, const Pose & pose, const Vec2 & goal)>;

/// Proportional go-to-goal law, forward motion only.
inline VelocityCommand go_to_goal(const Pose & pose, const Vec2 & goal, const ControllerParams & p)
{
  const Vec2 d = goal - pose.position;
  const double dist = d.norm();
  if (dist <= p.goal_tolerance) {
    return {};
  }
  const double err = wrap_angle(std::atan2(d.y(), d.x()) - pose.heading);
  const double w = std::clamp(p.angular_gain * err, -1.0, 1.0);
  const double v = std::min(1.0, p.linear_gain * dist) * std::max(0.0, std::cos(err));
  return {v, w};
}

/// Largest multiple of the period not exceeding the horizon (up to 1e-12
/// relative rounding of the product). Robots only act at ticks, so a horizon
/// that is not a multiple of the period would let an open-loop robot run past
/// it by up to one period.
inline double quantize_horizon(double horizon, double update_period)
{
  const double periods = std::floor(horizon / update_period + 1e-9);
  const double q = std::max(0.0, periods) * update_period;
  return q > horizon * (1.0 + 1e-12) ? std::max(0.0, (periods - 1.0) * update_period) : q;
}

namespace detail
{

/// Smallest sampled distance between two robots over (0, period], each
/// executing its command from its pose.
inline double min_sampled_distance(
  const Pose & a, const VelocityCommand & ca, const Pose & b, const VelocityCommand & cb,
  double period, int samples)
{
  double best = std::numeric_limits<double>::infinity();
  for (int q = 1; q <= samples; ++q) {
    const double tau = period * static_cast<double>(q) / samples;
    const Vec2 pa = integrate_pose(a, ca, tau).position;
    const Vec2 pb = integrate_pose(b, cb, tau).position;
    best = std::min(best, (pa - pb).norm());
  }
  return best;
}

/// Separation `threshold` that a sampled check must respect so that the true
/// continuous gap stays above `floor_distance`. Between samples spaced
/// period / samples apart, two unit-speed robots can close the gap by at most
/// period / samples below the smaller sampled value.
inline bool sampled_separation_ok(
  double current, double sampled_min, double keep, double floor_distance, double sample_gap)
{
  const double threshold = current >= keep ? keep : current;
  return sampled_min >= threshold && threshold - sample_gap > floor_distance;
}

}  // namespace detail

/// Commands and horizons for every robot at tick `tick`.
///
/// The nominal controller output is guarded: a robot's linear speed is zeroed
/// if, against any other robot executing its nominal command, its nominal
/// command with zero linear speed, or its on-board fallback, the sampled gap
/// over the next period would drop below collision_radius + guard_margin. The
/// guard therefore keeps communicating robots apart whichever of them actually
/// receives its packet. Horizons are then computed against every robot's
/// current pose and quantized to whole periods (0 in baseline mode).
inline std::vector<CommandPacket> decision_maker_tick(
  std::span<const RobotState> world, const ScenarioConfig & cfg, long long tick,
  const NominalController & controller = {})
{
  const std::size_t n = world.size();
  const double period = cfg.update_period;
  const auto & ctl = cfg.controller;
  const double keep = cfg.collision_radius + ctl.guard_margin;
  const double sample_gap = period / ctl.guard_samples;
  const double robot_floor = std::max(cfg.collision_radius, 1e-9);

  std::vector<VelocityCommand> nominal(n);
  std::vector<VelocityCommand> fallback(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & goal = cfg.robots.at(i).goal;
    nominal[i] = controller ? controller(i, world[i].pose, goal) :
      go_to_goal(world[i].pose, goal, ctl);
    nominal[i].linear = std::clamp(nominal[i].linear, -1.0, 1.0);
    nominal[i].angular = std::clamp(nominal[i].angular, -1.0, 1.0);
    fallback[i] = robot_tick(world[i], std::nullopt, tick, period).active;
  }

  std::vector<VelocityCommand> guarded = nominal;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ctl.guard || nominal[i].linear == 0.0) {
      continue;
    }
    bool stop = false;
    for (std::size_t j = 0; j < n && !stop; ++j) {
      if (j == i) {
        continue;
      }
      const double current = (world[i].pose.position - world[j].pose.position).norm();
      if (current > keep + 2.0 * period) {
        continue;
      }
      const std::array<VelocityCommand, 3> behaviours{
        nominal[j], VelocityCommand{0.0, nominal[j].angular}, fallback[j]};
      for (const auto & bj : behaviours) {
        const double d = detail::min_sampled_distance(
          world[i].pose, nominal[i], world[j].pose, bj, period, ctl.guard_samples);
        if (!detail::sampled_separation_ok(current, d, keep, robot_floor, sample_gap)) {
          stop = true;
          break;
        }
      }
    }
    for (std::size_t o = 0; o < cfg.obstacles.size() && !stop; ++o) {
      const auto & obs = cfg.obstacles[o];
      const double current = (world[i].pose.position - obs.position).norm();
      if (current > obs.radius + ctl.guard_margin + period) {
        continue;
      }
      const Pose obstacle_pose{obs.position, 0.0};
      const double d = detail::min_sampled_distance(
        world[i].pose, nominal[i], obstacle_pose, VelocityCommand{}, period, ctl.guard_samples);
      // Obstacle is static, so the gap shrinks by at most half a sample gap.
      if (!detail::sampled_separation_ok(
          current, d, obs.radius + ctl.guard_margin, obs.radius, 0.5 * sample_gap))
      {
        stop = true;
      }
    }
    if (stop) {
      guarded[i].linear = 0.0;
    }
  }

  std::vector<horizon::RobotSnapshot> fleet(n);
  for (std::size_t i = 0; i < n; ++i) {
    fleet[i] = {world[i].pose, guarded[i]};
  }
  const auto opts = cfg.horizon_options();

  std::vector<CommandPacket> packets(n);
  for (std::size_t i = 0; i < n; ++i) {
    double h = 0.0;
    if (!cfg.baseline) {
      const auto res = horizon::safe_horizon(fleet, i, cfg.horizon_cap, opts, cfg.obstacles);
      h = quantize_horizon(res.horizon, period);
    }
    packets[i] = CommandPacket{world[i].id, tick, guarded[i], h};
  }
  return packets;
}

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__DECISION_MAKER_HPP_

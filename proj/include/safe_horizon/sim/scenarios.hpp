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

#ifndef SAFE_HORIZON__SIM__SCENARIOS_HPP_
#define SAFE_HORIZON__SIM__SCENARIOS_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "safe_horizon/sim/channel.hpp"
#include "safe_horizon/sim/scenario.hpp"

namespace safe_horizon::sim
{

/// Six robots in two opposing lane groups; robots 1 and 4 lose their link over
/// [3.1, 8.3). Mirrors scenarios/outage_six_robots.ini.
inline ScenarioConfig outage_reproduction_config()
{
  ScenarioConfig cfg;
  cfg.update_period = 0.1;
  cfg.horizon_cap = 3.0;
  cfg.duration = 14.0;
  cfg.substeps_per_tick = 10;
  cfg.collision_radius = 0.2;
  cfg.failure.seed = 7;
  for (int lane = 0; lane < 3; ++lane) {
    const double y = 3.0 * lane;
    cfg.robots.push_back(RobotSpec{Pose{0.0, y, 0.0}, Vec2{20.0, y}, {}});
  }
  for (int lane = 0; lane < 3; ++lane) {
    const double y = 3.0 * lane + 1.5;
    cfg.robots.push_back(RobotSpec{Pose{20.0, y, kPi}, Vec2{0.0, y}, {}});
  }
  cfg.failure.outages = {Outage{1, 3.1, 8.3}, Outage{4, 3.1, 8.3}};
  return cfg;
}

/// Knobs of the randomized scenario family used for the end-to-end safety runs.
struct RandomScenarioOptions
{
  int min_robots{4};
  int max_robots{8};
  double arena{8.0};
  double min_start_separation{0.6};
  double drop_probability{0.5};
  double duration{12.0};
  double collision_radius{0.0};
};

/// Draw a scenario from `seed`: random fleet size, start poses, goals, horizon
/// cap and one to three scheduled outages on top of random packet drops.
inline ScenarioConfig random_scenario(std::uint64_t seed, const RandomScenarioOptions & opt = {})
{
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {return lo + (hi - lo) * unit_draw(rng);};
  auto pick = [&](int lo, int hi) {
      return lo + static_cast<int>(unit_draw(rng) * static_cast<double>(hi - lo + 1));
    };

  ScenarioConfig cfg;
  cfg.update_period = 0.1;
  cfg.horizon_cap = uniform(1.0, 4.0);
  cfg.duration = opt.duration;
  cfg.substeps_per_tick = 10;
  cfg.collision_radius = opt.collision_radius;
  cfg.failure.seed = seed ^ 0x9E3779B97F4A7C15ULL;
  cfg.failure.drop_probability = opt.drop_probability;

  const int n = pick(opt.min_robots, opt.max_robots);
  const double half = 0.5 * opt.arena;
  while (static_cast<int>(cfg.robots.size()) < n) {
    const Vec2 p{uniform(-half, half), uniform(-half, half)};
    bool clear = true;
    for (const auto & r : cfg.robots) {
      if ((r.start.position - p).norm() < opt.min_start_separation + opt.collision_radius) {
        clear = false;
        break;
      }
    }
    if (!clear) {
      continue;
    }
    const Vec2 goal{uniform(-half, half), uniform(-half, half)};
    cfg.robots.push_back(RobotSpec{Pose{p, uniform(-kPi, kPi)}, goal, {}});
  }
  const int outages = pick(1, 3);
  for (int k = 0; k < outages; ++k) {
    const int id = pick(0, n - 1);
    const double start = uniform(0.0, 0.6 * opt.duration);
    const double len = uniform(0.5, 0.5 * opt.duration);
    cfg.failure.outages.push_back(Outage{id, start, start + len});
  }
  return cfg;
}

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__SCENARIOS_HPP_

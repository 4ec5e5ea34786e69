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

#ifndef SAFE_HORIZON__SIM__SIMULATION_HPP_
#define SAFE_HORIZON__SIM__SIMULATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "safe_horizon/format.hpp"
#include "safe_horizon/sim/channel.hpp"
#include "safe_horizon/sim/decision_maker.hpp"
#include "safe_horizon/sim/robot.hpp"
#include "safe_horizon/sim/scenario.hpp"
#include "safe_horizon/unicycle.hpp"

namespace safe_horizon::sim
{

/// One robot at one substep.
struct LogRow
{
  double t{0.0};
  int robot_id{0};
  Pose pose{};
  /// Velocity executed over the substep starting at t.
  VelocityCommand command{};
  Mode mode{Mode::kStopped};
  bool delivered{false};
  /// Horizon carried by this tick's packet.
  double horizon{0.0};
  /// Distance to the nearest other robot at t (infinity for a lone robot).
  double min_pair_dist{std::numeric_limits<double>::infinity()};
};

/// Per-robot outcome of one decision-maker tick.
struct TickRecord
{
  long long tick{0};
  double t{0.0};
  int robot_id{0};
  Pose pose{};
  CommandPacket packet{};
  bool delivered{false};
  Mode mode{Mode::kStopped};
  long long last_cmd_tick{0};
  double last_horizon{0.0};
};

struct CollisionEvent
{
  double t{0.0};
  int robot_a{0};
  /// Second robot, or -1 - obstacle index for obstacle contacts.
  int robot_b{0};
  double distance{0.0};
};

struct StopInterval
{
  int robot_id{0};
  double start{0.0};
  double end{0.0};
};

struct OutageTravel
{
  int robot_id{0};
  double start{0.0};
  double end{0.0};
  /// Path length over substeps starting inside [start, end).
  double distance{0.0};
  /// Time of the last substep with non-zero motion inside the outage, or
  /// `start` if the robot never moved.
  double last_motion{0.0};
};

struct SimulationSummary
{
  std::size_t collisions{0};
  double min_pair_distance{std::numeric_limits<double>::infinity()};
  std::vector<StopInterval> stop_intervals;
  std::vector<OutageTravel> outage_travel;
};

struct SimulationLog
{
  std::vector<LogRow> rows;
  std::vector<TickRecord> ticks;
  std::vector<CollisionEvent> collisions;
  SimulationSummary summary;
};

inline constexpr const char * kLogHeader =
  "t,robot_id,x,y,heading,v,omega,mode,delivered,horizon,min_pair_dist";

inline void write_log_csv(std::ostream & out, const SimulationLog & log)
{
  out << kLogHeader << '\n';
  for (const auto & r : log.rows) {
    out << format_number(r.t) << ',' << r.robot_id << ',' << format_number(r.pose.position.x())
        << ',' << format_number(r.pose.position.y()) << ',' << format_number(r.pose.heading)
        << ',' << format_number(r.command.linear) << ',' << format_number(r.command.angular)
        << ',' << to_string(r.mode) << ',' << (r.delivered ? 1 : 0) << ','
        << format_number(r.horizon) << ',' << format_number(r.min_pair_dist) << '\n';
  }
}

inline std::string log_to_csv(const SimulationLog & log)
{
  std::ostringstream out;
  write_log_csv(out, log);
  return out.str();
}

/// Plain-text summary: collisions, stop intervals, travel during outages.
inline void write_summary(std::ostream & out, const SimulationSummary & s)
{
  out << "collisions: " << s.collisions << '\n';
  out << "min_pair_distance: " << format_number(s.min_pair_distance) << '\n';
  out << "stop_intervals:\n";
  for (const auto & iv : s.stop_intervals) {
    out << "  robot " << iv.robot_id << ": [" << format_number(iv.start) << ", "
        << format_number(iv.end) << ")\n";
  }
  out << "outage_travel:\n";
  for (const auto & o : s.outage_travel) {
    out << "  robot " << o.robot_id << " [" << format_number(o.start) << ", "
        << format_number(o.end) << "): distance " << format_number(o.distance)
        << ", last motion at " << format_number(o.last_motion) << '\n';
  }
}

namespace detail
{

inline double collision_floor(const ScenarioConfig & cfg)
{
  return std::max(cfg.collision_radius, 1e-9);
}

inline SimulationSummary summarize(const ScenarioConfig & cfg, const SimulationLog & log)
{
  SimulationSummary s;
  s.collisions = log.collisions.size();
  for (const auto & r : log.rows) {
    s.min_pair_distance = std::min(s.min_pair_distance, r.min_pair_dist);
  }

  const std::size_t n = cfg.robots.size();
  const double end_time = static_cast<double>(cfg.tick_count()) * cfg.update_period;
  std::vector<std::optional<double>> open(n);
  for (const auto & tr : log.ticks) {
    auto & cur = open[static_cast<std::size_t>(tr.robot_id)];
    if (tr.mode == Mode::kStopped) {
      if (!cur) {
        cur = tr.t;
      }
    } else if (cur) {
      s.stop_intervals.push_back({tr.robot_id, *cur, tr.t});
      cur.reset();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (open[i]) {
      s.stop_intervals.push_back({static_cast<int>(i), *open[i], end_time});
    }
  }
  std::stable_sort(
    s.stop_intervals.begin(), s.stop_intervals.end(),
    [](const StopInterval & a, const StopInterval & b) {return a.robot_id < b.robot_id;});

  // Rows are grouped by substep with one row per robot in id order.
  for (const auto & o : cfg.failure.outages) {
    OutageTravel ot{o.robot_id, o.start, o.end, 0.0, o.start};
    const auto id = static_cast<std::size_t>(o.robot_id);
    for (std::size_t k = id; k + n < log.rows.size(); k += n) {
      const auto & a = log.rows[k];
      const auto & b = log.rows[k + n];
      if (a.t >= o.start && a.t < o.end) {
        const double step = (b.pose.position - a.pose.position).norm();
        ot.distance += step;
        if (step > 0.0) {
          ot.last_motion = a.t;
        }
      }
    }
    s.outage_travel.push_back(ot);
  }
  return s;
}

}  // namespace detail

/// Run a scenario: every period the decision maker issues packets, the channel
/// decides which arrive, each robot applies its fallback rule, and the fleet is
/// advanced with substeps_per_tick exact integrations. Rows are logged at the
/// start of every substep plus once at the final time. Deterministic given the
/// configuration (including its seed).
inline SimulationLog run_scenario(const ScenarioConfig & cfg, const NominalController & controller = {})
{
  cfg.validate();
  const std::size_t n = cfg.robots.size();
  const double period = cfg.update_period;
  const int substeps = cfg.substeps_per_tick;
  const double dt = period / substeps;
  const double floor_dist = detail::collision_floor(cfg);

  std::vector<RobotState> robots;
  robots.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    robots.push_back(initial_robot_state(static_cast<int>(i), cfg.robots[i].start));
  }
  Channel channel(cfg.failure);
  SimulationLog log;
  const long long ticks = cfg.tick_count();
  log.rows.reserve(static_cast<std::size_t>(ticks * substeps + 1) * n);
  log.ticks.reserve(static_cast<std::size_t>(ticks) * n);

  std::vector<bool> delivered(n, false);
  std::vector<double> horizons(n, 0.0);

  auto record_substep = [&](double t) {
      std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double d = (robots[i].pose.position - robots[j].pose.position).norm();
          nearest[i] = std::min(nearest[i], d);
          nearest[j] = std::min(nearest[j], d);
          if (d <= floor_dist) {
            log.collisions.push_back({t, robots[i].id, robots[j].id, d});
          }
        }
        for (std::size_t o = 0; o < cfg.obstacles.size(); ++o) {
          const double d = (robots[i].pose.position - cfg.obstacles[o].position).norm();
          if (d <= cfg.obstacles[o].radius) {
            log.collisions.push_back({t, robots[i].id, -1 - static_cast<int>(o), d});
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        log.rows.push_back(LogRow{
            t, robots[i].id, robots[i].pose, robots[i].active, robots[i].mode, delivered[i],
            horizons[i], nearest[i]});
      }
    };

  for (long long k = 0; k < ticks; ++k) {
    const double t_k = static_cast<double>(k) * period;
    const auto packets = decision_maker_tick(robots, cfg, k, controller);
    const auto flags = channel.deliver(packets, t_k);
    for (std::size_t i = 0; i < n; ++i) {
      delivered[i] = flags[i];
      horizons[i] = packets[i].horizon;
      std::optional<CommandPacket> pkt;
      if (flags[i]) {
        pkt = packets[i];
      }
      robots[i] = robot_tick(robots[i], pkt, k, period);
      log.ticks.push_back(TickRecord{
          k, t_k, robots[i].id, robots[i].pose, packets[i], flags[i], robots[i].mode,
          robots[i].last_cmd_tick, robots[i].last_horizon});
    }
    for (int s = 0; s < substeps; ++s) {
      record_substep(t_k + static_cast<double>(s) * dt);
      for (auto & r : robots) {
        r.pose = integrate_pose(r.pose, r.active, dt);
      }
    }
  }
  record_substep(static_cast<double>(ticks) * period);

  log.summary = detail::summarize(cfg, log);
  return log;
}

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__SIMULATION_HPP_

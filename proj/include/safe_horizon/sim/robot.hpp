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

#ifndef SAFE_HORIZON__SIM__ROBOT_HPP_
#define SAFE_HORIZON__SIM__ROBOT_HPP_

#include <optional>
#include <string_view>

#include "safe_horizon/sim/packet.hpp"
#include "safe_horizon/types.hpp"

namespace safe_horizon::sim
{

enum class Mode
{
  kCommanded,
  kOpenLoop,
  kStopped,
};

inline std::string_view to_string(Mode m)
{
  switch (m) {
    case Mode::kCommanded: return "commanded";
    case Mode::kOpenLoop: return "open_loop";
    case Mode::kStopped: return "stopped";
  }
  return "unknown";
}

/// On-board state of one robot.
struct RobotState
{
  int id{0};
  Pose pose{};
  /// Last received command and horizon, and the tick it arrived on.
  VelocityCommand last_cmd{};
  long long last_cmd_tick{0};
  double last_horizon{0.0};
  Mode mode{Mode::kStopped};
  /// Velocity being executed during the current tick.
  VelocityCommand active{};
};

inline RobotState initial_robot_state(int id, const Pose & pose)
{
  RobotState s;
  s.id = id;
  s.pose = pose;
  return s;
}

/// One step of the on-board fallback rule:
///  - packet received: adopt it, remember the tick, execute it;
///  - else if (k - l) * delta < stored horizon: keep executing the stored command;
///  - else stop.
inline RobotState robot_tick(
  const RobotState & state, const std::optional<CommandPacket> & delivered, long long tick,
  double update_period)
{
  RobotState next = state;
  if (delivered) {
    next.last_cmd = delivered->command;
    next.last_horizon = delivered->horizon;
    next.last_cmd_tick = tick;
    next.mode = Mode::kCommanded;
    next.active = delivered->command;
    return next;
  }
  const double elapsed = static_cast<double>(tick - state.last_cmd_tick) * update_period;
  if (elapsed < state.last_horizon) {
    next.mode = Mode::kOpenLoop;
    next.active = state.last_cmd;
  } else {
    next.mode = Mode::kStopped;
    next.active = VelocityCommand{};
  }
  return next;
}

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__ROBOT_HPP_

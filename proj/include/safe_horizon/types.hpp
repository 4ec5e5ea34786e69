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

#ifndef SAFE_HORIZON__TYPES_HPP_
#define SAFE_HORIZON__TYPES_HPP_

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace safe_horizon
{

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Wrap an angle into [-pi, pi].
inline double wrap_angle(double angle)
{
  if (angle >= -kPi && angle <= kPi) {
    return angle;
  }
  double wrapped = std::remainder(angle, 2.0 * kPi);
  // remainder() maps onto [-pi, pi]; pin the +pi/-pi tie to +pi for stability.
  if (wrapped == -kPi) {
    wrapped = kPi;
  }
  return wrapped;
}

/// Planar position plus heading. The heading is kept in [-pi, pi].
struct Pose
{
  Vec2 position{Vec2::Zero()};
  double heading{0.0};

  Pose() = default;
  Pose(const Vec2 & p, double theta)
  : position(p), heading(wrap_angle(theta)) {}
  Pose(double x, double y, double theta)
  : position(x, y), heading(wrap_angle(theta)) {}
};

/// Linear and angular speed in normalized units, both bounded by 1 in magnitude.
struct VelocityCommand
{
  double linear{0.0};
  double angular{0.0};

  bool admissible() const
  {
    return std::isfinite(linear) && std::isfinite(angular) &&
           std::abs(linear) <= 1.0 && std::abs(angular) <= 1.0;
  }

  bool is_zero() const {return linear == 0.0 && angular == 0.0;}

  friend bool operator==(const VelocityCommand &, const VelocityCommand &) = default;
};

/// Build a command, rejecting speeds outside the normalized bounds.
inline VelocityCommand make_command(double linear, double angular)
{
  const VelocityCommand cmd{linear, angular};
  if (!cmd.admissible()) {
    throw std::invalid_argument(
            "velocity command out of bounds: linear=" + std::to_string(linear) +
            " angular=" + std::to_string(angular));
  }
  return cmd;
}

/// Maps a physical robot with speed limits (max_linear, max_angular) onto the
/// normalized model. One normalized length unit is max_linear / max_angular,
/// one normalized time unit is 1 / max_angular.
struct UnitScale
{
  double max_linear{1.0};
  double max_angular{1.0};

  UnitScale(double v_max, double w_max)
  : max_linear(v_max), max_angular(w_max)
  {
    if (!(v_max > 0.0) || !(w_max > 0.0)) {
      throw std::invalid_argument("UnitScale: speed limits must be positive");
    }
  }

  double length_unit() const {return max_linear / max_angular;}
  double time_unit() const {return 1.0 / max_angular;}

  double length_to_normalized(double meters) const {return meters / length_unit();}
  double length_to_physical(double normalized) const {return normalized * length_unit();}
  double time_to_normalized(double seconds) const {return seconds / time_unit();}
  double time_to_physical(double normalized) const {return normalized * time_unit();}

  Pose pose_to_normalized(const Pose & p) const
  {
    return Pose{p.position / length_unit(), p.heading};
  }
  Pose pose_to_physical(const Pose & p) const
  {
    return Pose{p.position * length_unit(), p.heading};
  }

  /// Physical (v, w) to normalized. Throws if the result exceeds the bounds.
  VelocityCommand command_to_normalized(double v, double w) const
  {
    return make_command(v / max_linear, w / max_angular);
  }
};

}  // namespace safe_horizon

#endif  // SAFE_HORIZON__TYPES_HPP_

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

#ifndef SAFE_HORIZON__UNICYCLE_HPP_
#define SAFE_HORIZON__UNICYCLE_HPP_

#include <cmath>
#include <stdexcept>

#include "safe_horizon/types.hpp"

namespace safe_horizon
{

/// Exact flow of x' = v cos(phi), y' = v sin(phi), phi' = w over dt with
/// constant (v, w). Circular arc when w != 0, straight segment otherwise.
inline Pose integrate_pose(const Pose & pose, const VelocityCommand & cmd, double dt)
{
  if (!(dt >= 0.0)) {
    throw std::invalid_argument("integrate_pose: dt must be non-negative");
  }
  const double phi = pose.heading;
  const double v = cmd.linear;
  const double w = cmd.angular;
  if (w == 0.0) {
    return Pose{pose.position + dt * v * Vec2{std::cos(phi), std::sin(phi)}, phi};
  }
  // sin(a + b) - sin(a) = 2 cos(a + b/2) sin(b/2), and likewise for cos; the
  // half-angle form stays accurate for small w * dt.
  const double half = 0.5 * w * dt;
  const double mid = phi + half;
  const double chord = 2.0 * std::sin(half) / w;
  return Pose{
    pose.position + v * chord * Vec2{std::cos(mid), std::sin(mid)},
    phi + w * dt};
}

}  // namespace safe_horizon

#endif  // SAFE_HORIZON__UNICYCLE_HPP_

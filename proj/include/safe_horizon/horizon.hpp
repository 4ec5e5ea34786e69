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

#ifndef SAFE_HORIZON__HORIZON_HPP_
#define SAFE_HORIZON__HORIZON_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "safe_horizon/ellipse.hpp"
#include "safe_horizon/types.hpp"
#include "safe_horizon/unicycle.hpp"

namespace safe_horizon::horizon
{

/// Numerical knobs of the first-entry search.
struct SolverOptions
{
  /// Grid step of the entry scan, normalized time.
  double step{0.01};
  /// Bisection bracket width at termination.
  double tolerance{1e-6};
  /// kappa: the result is pulled back by kappa * step.
  double margin_factor{0.0};
  /// Robot clearance r; neighbor ellipses are replaced by outer bounds of their
  /// r-neighborhoods.
  double clearance{0.0};

  void validate() const
  {
    if (!(step > 0.0) || !(tolerance > 0.0) || !(margin_factor >= 0.0) || !(clearance >= 0.0)) {
      throw std::invalid_argument("SolverOptions: step and tolerance must be positive, "
              "margin_factor and clearance non-negative");
    }
  }
};

/// Pose plus the command the robot will repeat if it loses its link.
struct RobotSnapshot
{
  Pose pose;
  VelocityCommand command;
};

/// Stationary obstacle treated as a robot whose reachable set is a disk of
/// fixed radius.
struct Obstacle
{
  Vec2 position{Vec2::Zero()};
  double radius{0.0};
};

/// Result of the per-robot horizon computation.
struct SafeTimeResult
{
  double horizon{0.0};
  std::optional<std::size_t> limiting_neighbor;
  std::optional<std::size_t> limiting_obstacle;
  /// True iff no neighbor or obstacle limited the horizon (horizon == L).
  bool capped{false};
};

/// Position after repeating `cmd` for mu time units from `start`.
inline Vec2 open_loop_position(const Pose & start, const VelocityCommand & cmd, double mu)
{
  if (!(mu >= 0.0)) {
    throw std::invalid_argument("open_loop_position: mu must be non-negative");
  }
  return integrate_pose(start, cmd, mu).position;
}

/// Robots j != i with |z_i - z_j| < 2L + clearance (strict).
inline std::vector<std::size_t> neighbors(
  std::span<const Vec2> positions, std::size_t i, double cap, double clearance = 0.0)
{
  if (i >= positions.size()) {
    throw std::invalid_argument("neighbors: unknown robot id " + std::to_string(i));
  }
  if (!(cap > 0.0)) {
    throw std::invalid_argument("neighbors: horizon cap must be positive");
  }
  const double reach = 2.0 * cap + clearance;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j != i && (positions[i] - positions[j]).norm() < reach) {
      out.push_back(j);
    }
  }
  return out;
}

namespace detail
{

/// First time in (0, cap] at which gap(mu) <= 0, or nullopt. gap is assumed
/// positive at mu = 0. Grid points are checked, and every discrete local
/// minimum of gap is refined by golden section so that short dips between
/// grid points are not skipped.
template<typename Gap>
std::optional<double> first_entry(Gap && gap, double cap, const SolverOptions & opts)
{
  const double h = opts.step;
  const auto steps = static_cast<long>(std::ceil(cap / h - 1e-12));

  auto bisect = [&](double lo, double hi) {
      while (hi - lo > opts.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return lo;
    };

  auto refine_dip = [&](double lo, double hi) -> std::optional<double> {
      // Golden section on a bracket whose interior holds a local minimum.
      constexpr double kInvPhi = 0.61803398874989484820;
      const double lo0 = lo;
      double x1 = hi - kInvPhi * (hi - lo);
      double x2 = lo + kInvPhi * (hi - lo);
      double f1 = gap(x1);
      double f2 = gap(x2);
      for (int it = 0; it < 60 && hi - lo > opts.tolerance; ++it) {
        if (f1 <= 0.0) {return bisect(lo0, x1);}
        if (f2 <= 0.0) {return bisect(lo0, x2);}
        if (f1 < f2) {
          hi = x2; x2 = x1; f2 = f1;
          x1 = hi - kInvPhi * (hi - lo); f1 = gap(x1);
        } else {
          lo = x1; x1 = x2; f1 = f2;
          x2 = lo + kInvPhi * (hi - lo); f2 = gap(x2);
        }
      }
      return std::nullopt;
    };

  double mu_prev2 = 0.0;
  double mu_prev = 0.0;
  double g_prev2 = std::numeric_limits<double>::infinity();
  double g_prev = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= steps; ++k) {
    const double mu = (k == steps) ? cap : std::min(cap, static_cast<double>(k) * h);
    const double g = gap(mu);
    if (g <= 0.0) {
      return bisect(mu_prev, mu);
    }
    if (k >= 2 && g_prev <= g_prev2 && g_prev <= g) {
      if (auto hit = refine_dip(mu_prev2, mu)) {
        return hit;
      }
    }
    mu_prev2 = mu_prev;
    g_prev2 = g_prev;
    mu_prev = mu;
    g_prev = g;
  }
  return std::nullopt;
}

inline double pull_back(double entry_left, const SolverOptions & opts)
{
  return std::max(0.0, entry_left - opts.margin_factor * opts.step);
}

}  // namespace detail

/// Largest lambda <= cap such that robot i's open-loop position stays strictly
/// outside robot j's posed ellipse for all mu in (0, lambda]. The entry time is
/// bracketed on a grid then bisected; the left bracket end is returned, so the
/// result never overshoots the true entry. Returns 0 for coincident robots and
/// `cap` when i never enters.
inline double pairwise_safe_time(
  const RobotSnapshot & i, const Pose & j, double cap, const SolverOptions & opts = {})
{
  opts.validate();
  if (!(cap > 0.0)) {
    throw std::invalid_argument("pairwise_safe_time: horizon cap must be positive");
  }
  const double dist = (i.pose.position - j.position).norm();
  if (dist <= opts.clearance) {
    return 0.0;
  }
  if (dist >= 2.0 * cap + opts.clearance) {
    return cap;
  }
  auto gap = [&](double mu) {
      const ellipse::HorizonEllipse e(mu, j, opts.clearance);
      return e.membership(open_loop_position(i.pose, i.command, mu)) - 1.0;
    };
  const auto entry = detail::first_entry(gap, cap, opts);
  return entry ? detail::pull_back(*entry, opts) : cap;
}

/// Like pairwise_safe_time against a stationary disk obstacle: the first mu
/// with |Z_i(mu) - z_O| <= radius.
inline double obstacle_safe_time(
  const RobotSnapshot & i, const Obstacle & obstacle, double cap, const SolverOptions & opts = {})
{
  opts.validate();
  if (!(cap > 0.0)) {
    throw std::invalid_argument("obstacle_safe_time: horizon cap must be positive");
  }
  const double dist = (i.pose.position - obstacle.position).norm();
  if (dist <= obstacle.radius) {
    return 0.0;
  }
  if (dist >= cap + obstacle.radius) {
    return cap;
  }
  auto gap = [&](double mu) {
      return (open_loop_position(i.pose, i.command, mu) - obstacle.position).norm() -
             obstacle.radius;
    };
  const auto entry = detail::first_entry(gap, cap, opts);
  return entry ? detail::pull_back(*entry, opts) : cap;
}

/// s_i = min over neighbors (and obstacles) of the pairwise safe time, or the
/// cap when nothing is in range.
inline SafeTimeResult safe_horizon(
  std::span<const RobotSnapshot> fleet, std::size_t i, double cap,
  const SolverOptions & opts = {}, std::span<const Obstacle> obstacles = {})
{
  if (i >= fleet.size()) {
    throw std::invalid_argument("safe_horizon: unknown robot id " + std::to_string(i));
  }
  if (!(cap > 0.0)) {
    throw std::invalid_argument("safe_horizon: horizon cap must be positive");
  }
  std::vector<Vec2> positions;
  positions.reserve(fleet.size());
  for (const auto & r : fleet) {
    positions.push_back(r.pose.position);
  }

  SafeTimeResult result{cap, std::nullopt, std::nullopt, true};
  for (std::size_t j : neighbors(positions, i, cap, opts.clearance)) {
    const double s = pairwise_safe_time(fleet[i], fleet[j].pose, cap, opts);
    if (s < result.horizon || (result.capped && s < cap)) {
      result.horizon = s;
      result.limiting_neighbor = j;
      result.limiting_obstacle.reset();
      result.capped = false;
    }
  }
  for (std::size_t o = 0; o < obstacles.size(); ++o) {
    const double s = obstacle_safe_time(fleet[i], obstacles[o], cap, opts);
    if (s < result.horizon || (result.capped && s < cap)) {
      result.horizon = s;
      result.limiting_obstacle = o;
      result.limiting_neighbor.reset();
      result.capped = false;
    }
  }
  return result;
}

}  // namespace safe_horizon::horizon

#endif  // SAFE_HORIZON__HORIZON_HPP_

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

#ifndef SAFE_HORIZON__GEOMETRY_HPP_
#define SAFE_HORIZON__GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "safe_horizon/format.hpp"
#include "safe_horizon/types.hpp"

/// Reachable-set geometry of the unit-speed unicycle started at the origin
/// with heading 0.
///
/// conv(R(t)) is bounded by the curve C(t, psi) in the first quadrant and its
/// mirror images. K(t) = {|p| <= t, |p_y| <= alpha(t)} is a convex superset.
/// Area formulas here are FIRST-QUADRANT areas; multiply by 4 for the full set.
namespace safe_horizon::geometry
{

/// Absolute tolerance used for inclusive boundary membership.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Default number of boundary samples per quadrant.
inline constexpr std::size_t kDefaultSamples = 1024;

namespace detail
{
inline void require_positive_time(double t, const char * where)
{
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error(std::string(where) + ": time must be positive, got " +
            std::to_string(t));
  }
}
}  // namespace detail

/// Half-width of K(t) in y. Continuous and strictly increasing, equal to 1 at
/// t = pi/2.
inline double alpha(double t)
{
  detail::require_positive_time(t, "alpha");
  if (t <= kHalfPi) {
    // 1 - cos(t), written to avoid cancellation for small t.
    const double s = std::sin(0.5 * t);
    return 2.0 * s * s;
  }
  return t - kHalfPi + 1.0;
}

/// K(t) parameters.
struct KSetParams
{
  double t;
  double alpha;
};

inline KSetParams make_kset(double t)
{
  return KSetParams{t, alpha(t)};
}

/// A sample of the curved hull boundary together with its parameter.
struct HullBoundaryPoint
{
  double psi;
  Vec2 point;
};

/// Upper end of the curve parameter for time t.
inline double max_psi(double t)
{
  detail::require_positive_time(t, "max_psi");
  return std::min(t, kHalfPi);
}

/// Point of the curved first-quadrant hull boundary for parameter psi in
/// [0, min(t, pi/2)]: turn through psi then drive straight for t - psi.
inline Vec2 hull_boundary_point(double t, double psi)
{
  detail::require_positive_time(t, "hull_boundary_point");
  if (!(psi >= 0.0) || psi > max_psi(t)) {
    throw std::domain_error("hull_boundary_point: psi outside [0, min(t, pi/2)]");
  }
  const double gamma = t - psi;
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  const double half = std::sin(0.5 * psi);
  // 1 - cos(psi) == 2 sin^2(psi / 2)
  return Vec2{s + gamma * c, 2.0 * half * half + gamma * s};
}

/// |p(t, psi)|^2 in closed form.
inline double hull_norm_squared(double t, double psi)
{
  const double gamma = t - psi;
  return gamma * gamma + 2.0 - 2.0 * std::cos(psi) + 2.0 * gamma * std::sin(psi);
}

/// d|p(t, psi)|^2 / dpsi = 2 (t - psi)(cos(psi) - 1), never positive.
inline double hull_norm_squared_derivative(double t, double psi)
{
  return 2.0 * (t - psi) * (std::cos(psi) - 1.0);
}

/// Samples of the first-quadrant curve, uniform in psi, from (t, 0) to the top
/// end point (x_e, alpha(t)).
inline std::vector<HullBoundaryPoint> hull_quadrant_samples(double t, std::size_t n)
{
  detail::require_positive_time(t, "hull_quadrant_samples");
  if (n < 2) {
    throw std::invalid_argument("hull_quadrant_samples: need at least 2 samples");
  }
  const double psi_max = max_psi(t);
  std::vector<HullBoundaryPoint> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double psi =
      (k + 1 == n) ? psi_max : psi_max * static_cast<double>(k) / static_cast<double>(n - 1);
    out.push_back({psi, hull_boundary_point(t, psi)});
  }
  return out;
}

/// Counterclockwise closed polyline approximating the boundary of conv(R(t)).
/// The first-quadrant curve is mirrored into all four quadrants; consecutive
/// quadrants are joined by the straight top/bottom edges. The first vertex
/// (t, 0) is repeated at the end.
inline std::vector<Vec2> hull_boundary_polyline(double t, std::size_t n = kDefaultSamples)
{
  detail::require_positive_time(t, "hull_boundary_polyline");
  if (n < 4) {
    throw std::invalid_argument("hull_boundary_polyline: need n >= 4 samples per quadrant");
  }
  const auto q1 = hull_quadrant_samples(t, n);
  std::vector<Vec2> ring;
  ring.reserve(4 * n);
  for (const auto & s : q1) {
    ring.push_back(s.point);
  }
  for (auto it = q1.rbegin(); it != q1.rend(); ++it) {
    ring.push_back(Vec2{-it->point.x(), it->point.y()});
  }
  // Third quadrant starts at (-t, 0), already emitted.
  for (std::size_t k = 1; k < q1.size(); ++k) {
    ring.push_back(-q1[k].point);
  }
  for (auto it = q1.rbegin(); it != q1.rend(); ++it) {
    ring.push_back(Vec2{it->point.x(), -it->point.y()});
  }
  return ring;
}

/// Boundary of K(t) as a closed counterclockwise polyline: arc samples of the
/// radius-t circle joined by the flat edges |y| = alpha(t).
inline std::vector<Vec2> kset_boundary_polyline(double t, std::size_t n = kDefaultSamples)
{
  detail::require_positive_time(t, "kset_boundary_polyline");
  if (n < 2) {
    throw std::invalid_argument("kset_boundary_polyline: need n >= 2 samples per quadrant");
  }
  const double a = std::min(alpha(t), t);
  const double theta_max = std::asin(a / t);
  std::vector<Vec2> q1;
  q1.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = theta_max * static_cast<double>(k) / static_cast<double>(n - 1);
    q1.emplace_back(t * std::cos(th), t * std::sin(th));
  }
  q1.back().y() = a;
  std::vector<Vec2> ring;
  ring.reserve(4 * n);
  for (const auto & p : q1) {ring.push_back(p);}
  for (auto it = q1.rbegin(); it != q1.rend(); ++it) {ring.emplace_back(-it->x(), it->y());}
  for (std::size_t k = 1; k < q1.size(); ++k) {ring.push_back(-q1[k]);}
  for (auto it = q1.rbegin(); it != q1.rend(); ++it) {ring.emplace_back(it->x(), -it->y());}
  return ring;
}

/// Signed shoelace area; positive for counterclockwise rings. Works with or
/// without the closing duplicate vertex.
inline double polygon_area(std::span<const Vec2> ring)
{
  if (ring.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Vec2 & a = ring[k];
    const Vec2 & b = ring[(k + 1) % ring.size()];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * twice;
}

/// Full hull area by polygon integration of the sampled boundary. Valid for
/// every t > 0.
inline double hull_area_polygon(double t, std::size_t n = kDefaultSamples)
{
  return polygon_area(hull_boundary_polyline(t, n));
}

/// Closed-form first-quadrant area of conv(R(t)), valid for t > pi/2:
/// (12 pi (t^2 - 1) + t (48 - 6 pi^2) + pi^3) / 48.
inline double hull_area_first_quadrant(double t)
{
  if (!(t > kHalfPi) || !std::isfinite(t)) {
    throw std::domain_error(
            "hull_area_first_quadrant: closed form needs t > pi/2; "
            "use hull_area_polygon(t) / 4 instead");
  }
  return (12.0 * kPi * (t * t - 1.0) + t * (48.0 - 6.0 * kPi * kPi) + kPi * kPi * kPi) / 48.0;
}

/// Closed-form first-quadrant area of K(t) for t > pi/2, with
/// delta(t) = (pi/2 - 1) / t.
inline double kset_area_first_quadrant(double t)
{
  if (!(t > kHalfPi) || !std::isfinite(t)) {
    throw std::domain_error("kset_area_first_quadrant: closed form needs t > pi/2");
  }
  const double delta = (kHalfPi - 1.0) / t;
  const double theta = std::asin(1.0 - delta);
  return 0.5 * t * t * (theta + 0.5 * std::sin(2.0 * theta));
}

/// Inclusive membership in K(t) with absolute tolerance kBoundaryTolerance.
inline bool kset_contains(double t, const Vec2 & p)
{
  detail::require_positive_time(t, "kset_contains");
  return p.norm() <= t + kBoundaryTolerance &&
         std::abs(p.y()) <= alpha(t) + kBoundaryTolerance;
}

/// Jaccard distance of nested sets: 1 - area_inner / area_outer.
inline double jaccard_nested(double area_inner, double area_outer)
{
  if (!(area_inner > 0.0) || !(area_outer > 0.0)) {
    throw std::invalid_argument("jaccard_nested: areas must be positive");
  }
  if (area_inner > area_outer * (1.0 + 1e-12)) {
    throw std::invalid_argument("jaccard_nested: inner area exceeds outer area");
  }
  return std::max(0.0, 1.0 - area_inner / area_outer);
}

/// CSV with header `x,y`, one vertex per row. The ring is closed on output
/// (first vertex repeated last) if it is not already.
inline void write_polyline_csv(std::ostream & out, std::span<const Vec2> ring)
{
  out << "x,y\n";
  for (const auto & p : ring) {
    out << format_number(p.x()) << ',' << format_number(p.y()) << '\n';
  }
  if (!ring.empty() && ring.front() != ring.back()) {
    out << format_number(ring.front().x()) << ',' << format_number(ring.front().y()) << '\n';
  }
}

}  // namespace safe_horizon::geometry

#endif  // SAFE_HORIZON__GEOMETRY_HPP_

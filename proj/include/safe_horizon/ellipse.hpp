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

#ifndef SAFE_HORIZON__ELLIPSE_HPP_
#define SAFE_HORIZON__ELLIPSE_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "safe_horizon/format.hpp"
#include "safe_horizon/geometry.hpp"
#include "safe_horizon/types.hpp"

namespace safe_horizon::ellipse
{

/// (1 + 1/sqrt(2)) (pi - 2): beyond this time the minimum-area ellipse around
/// K(t) is the radius-t circle.
inline constexpr double kCircleBreakpoint =
  (1.0 + 0.70710678118654752440) * (std::numbers::pi - 2.0);

/// Below this time the ellipse is treated as the single point at its center.
inline constexpr double kDegenerateTime = 1e-9;

enum class Regime
{
  kSmallTime,   ///< 0 < t <= pi/2, alpha = 1 - cos t
  kTransition,  ///< pi/2 < t <= t*, alpha = t - pi/2 + 1
  kCircle,      ///< t > t*
};

inline Regime regime(double t)
{
  if (!(t > 0.0)) {
    throw std::domain_error("regime: time must be positive");
  }
  if (t <= kHalfPi) {
    return Regime::kSmallTime;
  }
  if (t <= kCircleBreakpoint) {
    return Regime::kTransition;
  }
  return Regime::kCircle;
}

/// Diagonal of H(t) = diag(A, B); the ellipse is {u : A u_x^2 + B u_y^2 <= 1}.
struct ShapeMatrix
{
  double a;
  double b;
};

/// Analytic minimum-area ellipse circumscribing K(t). Closed intervals follow
/// the regime statement; at t* both branches coincide.
inline ShapeMatrix min_ellipse_params(double t)
{
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("min_ellipse_params: time must be positive");
  }
  if (t > kCircleBreakpoint) {
    const double inv = 1.0 / (t * t);
    return {inv, inv};
  }
  const double al = geometry::alpha(t);
  return {1.0 / (2.0 * (t * t - al * al)), 1.0 / (2.0 * al * al)};
}

/// Semi-axis lengths along heading (x) and across it (y).
inline std::array<double, 2> semi_axes(double t)
{
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("semi_axes: time must be positive");
  }
  if (t > kCircleBreakpoint) {
    return {t, t};
  }
  const double al = geometry::alpha(t);
  return {std::sqrt(2.0 * (t * t - al * al)), std::sqrt(2.0) * al};
}

/// First-quadrant area of the ellipse, pi / (4 sqrt(A B)).
inline double area_first_quadrant(double t)
{
  const auto ax = semi_axes(t);
  return 0.25 * kPi * ax[0] * ax[1];
}

/// The four points where the ellipse touches K(t): (+-sqrt(t^2 - alpha^2), +-alpha).
/// Only defined for t <= t*; past it the contact set is a continuum.
inline std::array<Vec2, 4> contact_points(double t)
{
  if (!(t > 0.0)) {
    throw std::domain_error("contact_points: time must be positive");
  }
  if (t > kCircleBreakpoint) {
    throw std::domain_error("contact_points: only isolated for t <= t*");
  }
  const double al = geometry::alpha(t);
  const double x = std::sqrt(t * t - al * al);
  return {Vec2{x, al}, Vec2{-x, al}, Vec2{-x, -al}, Vec2{x, -al}};
}

/// Ellipse over-approximating the reachable set of a robot after time t,
/// optionally placed at a pose (center = position, major axis along heading).
///
/// A clearance r > 0 replaces the ellipse with an outer bound of its Minkowski
/// sum with a disk of radius r. With semi-axes (a, b) the bound has semi-axes
/// a + r and sqrt(b^2 + r^2 + r (a + b^2 / a)); it is exact when a = b.
class HorizonEllipse
{
public:
  explicit HorizonEllipse(double t, std::optional<Pose> pose = std::nullopt, double clearance = 0.0)
  : t_(t), pose_(pose), clearance_(clearance)
  {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::domain_error("HorizonEllipse: time must be positive");
    }
    if (!(clearance >= 0.0)) {
      throw std::invalid_argument("HorizonEllipse: clearance must be non-negative");
    }
    shape_ = min_ellipse_params(t);
    if (t < kDegenerateTime) {
      axes_ = {clearance, clearance};
    } else {
      axes_ = inflate(semi_axes(t), clearance);
    }
  }

  double time() const {return t_;}
  const ShapeMatrix & shape() const {return shape_;}
  const std::optional<Pose> & pose() const {return pose_;}
  double clearance() const {return clearance_;}
  /// Semi-axes including clearance.
  const std::array<double, 2> & axes() const {return axes_;}

  Vec2 center() const {return pose_ ? pose_->position : Vec2::Zero();}

  /// World point into the ellipse frame.
  Vec2 to_local(const Vec2 & p) const
  {
    if (!pose_) {
      return p;
    }
    const Vec2 d = p - pose_->position;
    const double c = std::cos(pose_->heading);
    const double s = std::sin(pose_->heading);
    return Vec2{c * d.x() + s * d.y(), -s * d.x() + c * d.y()};
  }

  /// Quadratic-form value u^T H u (with H built from the grown axes when
  /// clearance > 0). The point is inside iff the value is <= 1.
  double membership(const Vec2 & p) const
  {
    const Vec2 u = to_local(p);
    if (axes_[0] == 0.0 || axes_[1] == 0.0) {
      // Degenerate point ellipse.
      return (u.x() == 0.0 && u.y() == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (clearance_ == 0.0) {
      return shape_.a * u.x() * u.x() + shape_.b * u.y() * u.y();
    }
    const double qx = u.x() / axes_[0];
    const double qy = u.y() / axes_[1];
    return qx * qx + qy * qy;
  }

  bool contains(const Vec2 & p) const {return membership(p) <= 1.0;}

  /// Closed boundary polyline in world coordinates (first vertex repeated).
  std::vector<Vec2> boundary_polyline(std::size_t samples = 256) const
  {
    if (samples < 3) {
      throw std::invalid_argument("boundary_polyline: need at least 3 samples");
    }
    const double c = pose_ ? std::cos(pose_->heading) : 1.0;
    const double s = pose_ ? std::sin(pose_->heading) : 0.0;
    const Vec2 origin = center();
    std::vector<Vec2> ring;
    ring.reserve(samples + 1);
    for (std::size_t k = 0; k < samples; ++k) {
      const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples);
      const double lx = axes_[0] * std::cos(th);
      const double ly = axes_[1] * std::sin(th);
      ring.push_back(origin + Vec2{c * lx - s * ly, s * lx + c * ly});
    }
    ring.push_back(ring.front());
    return ring;
  }

  /// Semi-axes of an ellipse containing every point within r of the ellipse
  /// with semi-axes `ax`: E(Q1) + E(Q2) lies in E((1 + 1/p) Q1 + (1 + p) Q2)
  /// for p > 0, here with Q2 = r^2 I and p = ax[0] / r.
  static std::array<double, 2> inflate(const std::array<double, 2> & ax, double r)
  {
    if (r == 0.0) {
      return ax;
    }
    const double a = ax[0];
    const double b = ax[1];
    return {a + r, std::sqrt(b * b + r * r + r * (a + b * b / a))};
  }

private:
  double t_;
  std::optional<Pose> pose_;
  double clearance_;
  ShapeMatrix shape_{};
  std::array<double, 2> axes_{};
};

/// u^T diag(A, B) u with u = rotate(-heading) (p - position).
inline double ellipse_membership(const HorizonEllipse & e, const Vec2 & p)
{
  return e.membership(p);
}

/// CSV `t,A,B` rows.
inline void write_params_csv(std::ostream & out, std::span<const double> times)
{
  out << "t,A,B\n";
  for (double t : times) {
    const auto h = min_ellipse_params(t);
    out << format_number(t) << ',' << format_number(h.a) << ',' << format_number(h.b) << '\n';
  }
}

}  // namespace safe_horizon::ellipse

#endif  // SAFE_HORIZON__ELLIPSE_HPP_

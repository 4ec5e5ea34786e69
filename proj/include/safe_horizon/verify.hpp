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

#ifndef SAFE_HORIZON__VERIFY_HPP_
#define SAFE_HORIZON__VERIFY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "safe_horizon/ellipse.hpp"
#include "safe_horizon/format.hpp"
#include "safe_horizon/geometry.hpp"
#include "safe_horizon/sim/scenarios.hpp"
#include "safe_horizon/sim/simulation.hpp"
#include "safe_horizon/unicycle.hpp"

/// Oracle-backed verification suites. Every oracle here is computed by an
/// independent route (brute force, quadrature, finite differences, random
/// rollouts) and compared against the analytic implementation.
namespace safe_horizon::verify
{

struct Check
{
  std::string name;
  double measured{0.0};
  double tolerance{0.0};
  bool passed{false};
  std::string note;
};

struct SuiteReport
{
  std::string suite;
  std::vector<Check> checks;

  bool passed() const
  {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check & c) {return c.passed;});
  }
};

inline void write_report(std::ostream & out, const SuiteReport & r)
{
  for (const auto & c : r.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << r.suite << '/' << c.name
        << " measured=" << format_number(c.measured)
        << " tolerance=" << format_number(c.tolerance);
    if (!c.note.empty()) {
      out << " (" << c.note << ')';
    }
    out << '\n';
  }
}

namespace oracle
{

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)> & f, double a, double b, double tol)
{
  std::function<double(double, double, double, double, double, double, int)> rec =
    [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int depth) {
      const double mid = 0.5 * (lo + hi);
      const double lm = 0.5 * (lo + mid);
      const double rm = 0.5 * (mid + hi);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
      const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
      if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
      }
      return rec(lo, mid, flo, flm, fmid, left, depth - 1) +
             rec(mid, hi, fmid, frm, fhi, right, depth - 1);
    };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 50);
}

/// First-quadrant hull area by Green's theorem: the end point of "turn left at
/// full rate for psi, then drive straight for t - psi", traced over psi, closed
/// by the horizontal top edge and the axes.
inline double hull_area_first_quadrant(double t)
{
  const double psi_max = std::min(t, kHalfPi);
  auto integrand = [t](double psi) {
      const double g = t - psi;
      const double x = std::sin(psi) + g * std::cos(psi);
      const double y = (1.0 - std::cos(psi)) + g * std::sin(psi);
      const double dx = -g * std::sin(psi);
      const double dy = g * std::cos(psi);
      return 0.5 * (x * dy - y * dx);
    };
  const double curve = integrate(integrand, 0.0, psi_max, 1e-13);
  const double g = t - psi_max;
  const double xe = std::sin(psi_max) + g * std::cos(psi_max);
  const double ye = (1.0 - std::cos(psi_max)) + g * std::sin(psi_max);
  return curve + 0.5 * xe * ye;
}

/// First-quadrant area of {|p| <= t, 0 <= y <= alpha} by quadrature in y.
inline double kset_area_first_quadrant(double t)
{
  const double a = t <= kHalfPi ? 1.0 - std::cos(t) : t - kHalfPi + 1.0;
  return integrate(
    [t](double y) {return std::sqrt(std::max(0.0, t * t - y * y));}, 0.0, std::min(a, t), 1e-13);
}

struct EllipseFit
{
  double a;
  double b;
  /// -log(a b)
  double cost;
};

/// Minimum of -log(A B) over origin-centered axis-aligned ellipses containing
/// `samples` points of the K(t) boundary. For fixed A the largest feasible B
/// is min (1 - A x^2) / y^2 over the samples; A is found by a dense scan
/// refined with golden section.
inline EllipseFit brute_force_ellipse(double t, std::size_t samples = 720)
{
  const double al = t <= kHalfPi ? 1.0 - std::cos(t) : t - kHalfPi + 1.0;
  const double xc = std::sqrt(t * t - al * al);
  const double th_max = std::asin(al / t);
  const std::size_t half = samples / 2;
  std::vector<std::array<double, 2>> pts;
  pts.reserve(2 * half);
  for (std::size_t k = 0; k < half; ++k) {
    const double th = th_max * static_cast<double>(k) / static_cast<double>(half - 1);
    pts.push_back({t * std::cos(th), t * std::sin(th)});
  }
  for (std::size_t k = 0; k < half; ++k) {
    pts.push_back({xc * static_cast<double>(k) / static_cast<double>(half - 1), al});
  }
  double x2max = 0.0;
  for (const auto & p : pts) {
    x2max = std::max(x2max, p[0] * p[0]);
  }
  const double a_max = 1.0 / x2max;

  auto best_b = [&](double a) {
      double b = std::numeric_limits<double>::infinity();
      for (const auto & p : pts) {
        if (p[1] > 0.0) {
          b = std::min(b, (1.0 - a * p[0] * p[0]) / (p[1] * p[1]));
        }
      }
      return b;
    };
  auto cost = [&](double a) {
      const double b = best_b(a);
      return b > 0.0 ? -std::log(a) - std::log(b) : std::numeric_limits<double>::infinity();
    };

  constexpr int kGrid = 4000;
  double best_a = a_max;
  double best_c = cost(a_max);
  int best_k = kGrid;
  for (int k = 1; k <= kGrid; ++k) {
    const double a = a_max * static_cast<double>(k) / kGrid;
    const double c = cost(a);
    if (c < best_c) {
      best_c = c;
      best_a = a;
      best_k = k;
    }
  }
  double lo = a_max * static_cast<double>(std::max(best_k - 1, 1)) / kGrid;
  double hi = a_max * static_cast<double>(std::min(best_k + 1, kGrid)) / kGrid;
  constexpr double kInvPhi = 0.61803398874989484820;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * a_max; ++it) {
    const double m1 = hi - kInvPhi * (hi - lo);
    const double m2 = lo + kInvPhi * (hi - lo);
    if (cost(m1) <= cost(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double a_mid = 0.5 * (lo + hi);
  if (cost(a_mid) < best_c) {
    best_a = a_mid;
    best_c = cost(a_mid);
  }
  return {best_a, best_b(best_a), best_c};
}

}  // namespace oracle

/// Analytic ellipse against the brute-force fit, plus regime continuity.
inline SuiteReport verify_ellipse()
{
  SuiteReport r{"ellipse", {}};
  for (double t : {0.5, 1.0, 1.5, 2.5}) {
    const auto h = ellipse::min_ellipse_params(t);
    const double analytic = -std::log(h.a * h.b);
    const auto fit = oracle::brute_force_ellipse(t);
    const double err = std::abs(analytic - fit.cost);
    r.checks.push_back({"optimality t=" + format_number(t), err, 1e-3, err <= 1e-3,
        "-log(AB) analytic " + format_number(analytic) + " oracle " + format_number(fit.cost)});
  }
  for (double tb : {kHalfPi, ellipse::kCircleBreakpoint}) {
    const double lo = std::nextafter(tb, 0.0);
    const double hi = std::nextafter(tb, 10.0);
    const auto a = ellipse::min_ellipse_params(lo);
    const auto b = ellipse::min_ellipse_params(hi);
    const auto at = ellipse::min_ellipse_params(tb);
    const double jump = std::max(
      {std::abs(a.a - b.a), std::abs(a.b - b.b), std::abs(at.a - b.a), std::abs(at.b - b.b)});
    r.checks.push_back({"continuity t=" + format_number(tb), jump, 1e-9, jump < 1e-9, ""});
  }
  return r;
}

/// Sampled hull and K(t) boundaries never leave the ellipse.
inline SuiteReport verify_containment(std::uint64_t seed = 1, int count = 200)
{
  SuiteReport r{"containment", {}};
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  double worst_t = 0.0;
  for (int k = 0; k < count; ++k) {
    // (0, 30]
    const double t = 30.0 * (1.0 - sim::unit_draw(rng));
    const ellipse::HorizonEllipse e(t);
    for (const auto & ring : {geometry::hull_boundary_polyline(t, 512),
        geometry::kset_boundary_polyline(t, 512)})
    {
      for (const auto & p : ring) {
        const double m = e.membership(p);
        if (m > worst) {
          worst = m;
          worst_t = t;
        }
      }
    }
  }
  r.checks.push_back({"max membership - 1 over " + std::to_string(count) + " times",
      worst - 1.0, 1e-9, worst <= 1.0 + 1e-9, "attained at t=" + format_number(worst_t)});
  return r;
}

/// Closed-form first-quadrant areas against quadrature.
inline SuiteReport verify_areas()
{
  SuiteReport r{"area", {}};
  for (double t : {2.0, kPi, 5.0, 10.0, 25.0}) {
    const double hull = geometry::hull_area_first_quadrant(t);
    const double hull_q = oracle::hull_area_first_quadrant(t);
    const double e1 = std::abs(hull - hull_q) / hull_q;
    r.checks.push_back({"hull t=" + format_number(t), e1, 1e-4, e1 <= 1e-4,
        "closed " + format_number(hull) + " quadrature " + format_number(hull_q)});
    const double k = geometry::kset_area_first_quadrant(t);
    const double k_q = oracle::kset_area_first_quadrant(t);
    const double e2 = std::abs(k - k_q) / k_q;
    r.checks.push_back({"kset t=" + format_number(t), e2, 1e-4, e2 <= 1e-4,
        "closed " + format_number(k) + " quadrature " + format_number(k_q)});
    const double poly = geometry::hull_area_polygon(t) / 4.0;
    const double e3 = std::abs(poly - hull_q) / hull_q;
    r.checks.push_back({"hull polygon t=" + format_number(t), e3, 1e-4, e3 <= 1e-4, ""});
  }
  return r;
}

/// Jaccard distances shrink with t; d_J(hull, ellipse) < 0.02 at t = 25.
inline SuiteReport verify_jaccard()
{
  SuiteReport r{"jaccard", {}};
  const std::array<double, 3> times{5.0, 10.0, 25.0};
  std::array<double, 3> d_k{};
  std::array<double, 3> d_xi{};
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const double hull = oracle::hull_area_first_quadrant(t);
    d_k[k] = geometry::jaccard_nested(hull, oracle::kset_area_first_quadrant(t));
    d_xi[k] = geometry::jaccard_nested(hull, ellipse::area_first_quadrant(t));
  }
  const double dec_k = std::max(d_k[1] - d_k[0], d_k[2] - d_k[1]);
  const double dec_xi = std::max(d_xi[1] - d_xi[0], d_xi[2] - d_xi[1]);
  r.checks.push_back({"d_J(hull,K) strictly decreasing over 5,10,25", dec_k, 0.0, dec_k < 0.0,
      "values " + format_number(d_k[0]) + " " + format_number(d_k[1]) + " " + format_number(d_k[2])});
  r.checks.push_back({"d_J(hull,xi) strictly decreasing over 5,10,25", dec_xi, 0.0, dec_xi < 0.0,
      "values " + format_number(d_xi[0]) + " " + format_number(d_xi[1]) + " " +
      format_number(d_xi[2])});
  r.checks.push_back({"d_J(hull,xi) at t=25", d_xi[2], 0.02, d_xi[2] < 0.02, ""});
  return r;
}

/// Analytic d|p|^2/dpsi against central differences of the sampled curve.
inline SuiteReport verify_derivative(std::uint64_t seed = 2, int count = 100)
{
  SuiteReport r{"derivative", {}};
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  double worst_sign = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    const double t = 0.05 + 9.95 * sim::unit_draw(rng);
    const double psi_max = geometry::max_psi(t);
    const double h = 1e-5;
    const double psi = h + (psi_max - 2.0 * h) * sim::unit_draw(rng);
    const double fd =
      (geometry::hull_boundary_point(t, psi + h).squaredNorm() -
      geometry::hull_boundary_point(t, psi - h).squaredNorm()) / (2.0 * h);
    const double analytic = geometry::hull_norm_squared_derivative(t, psi);
    worst = std::max(worst, std::abs(fd - analytic));
    worst_sign = std::max(worst_sign, analytic);
  }
  r.checks.push_back({"max |analytic - central difference|", worst, 1e-6, worst <= 1e-6, ""});
  r.checks.push_back({"max derivative (must be <= 0)", worst_sign, 0.0, worst_sign <= 0.0, ""});
  return r;
}

/// Random admissible piecewise-constant rollouts stay inside the posed ellipse
/// at every control switch and at the final time.
inline SuiteReport verify_rollouts(std::uint64_t seed = 3, int per_horizon = 200)
{
  SuiteReport r{"rollout", {}};
  std::mt19937_64 rng(seed);
  auto u = [&](double lo, double hi) {return lo + (hi - lo) * sim::unit_draw(rng);};
  const double switch_period = 0.05;
  double worst = 0.0;
  std::size_t checked = 0;
  for (double horizon : {0.25, 0.5, 1.0, 1.5, kHalfPi, 1.8, ellipse::kCircleBreakpoint, 2.5,
      5.0})
  {
    for (int k = 0; k < per_horizon; ++k) {
      const Pose start{u(-5.0, 5.0), u(-5.0, 5.0), u(-kPi, kPi)};
      Pose p = start;
      double elapsed = 0.0;
      while (elapsed < horizon - 1e-12) {
        // Half of the draws are bang-bang to push towards the boundary.
        VelocityCommand c{u(-1.0, 1.0), u(-1.0, 1.0)};
        if (sim::unit_draw(rng) < 0.5) {
          c.linear = c.linear < 0.0 ? -1.0 : 1.0;
          c.angular = c.angular < 0.0 ? -1.0 : 1.0;
        }
        const double dt = std::min(switch_period, horizon - elapsed);
        p = integrate_pose(p, c, dt);
        elapsed += dt;
        const ellipse::HorizonEllipse e(elapsed, start);
        worst = std::max(worst, e.membership(p.position));
        ++checked;
      }
    }
  }
  r.checks.push_back({"max membership - 1 over " + std::to_string(checked) + " rollout points",
      worst - 1.0, 1e-6, worst <= 1.0 + 1e-6, ""});
  return r;
}

/// Randomized fleets with outages and drops never collide.
inline SuiteReport verify_fleet_safety(int runs = 100, std::uint64_t seed = 7)
{
  SuiteReport r{"theorem3", {}};
  std::size_t collisions = 0;
  double min_dist = std::numeric_limits<double>::infinity();
  std::size_t open_loop_ticks = 0;
  for (int k = 0; k < runs; ++k) {
    const auto cfg = sim::random_scenario(seed * 1000003ULL + static_cast<std::uint64_t>(k));
    const auto log = sim::run_scenario(cfg);
    collisions += log.summary.collisions;
    min_dist = std::min(min_dist, log.summary.min_pair_distance);
    for (const auto & t : log.ticks) {
      open_loop_ticks += t.mode == sim::Mode::kOpenLoop ? 1 : 0;
    }
  }
  r.checks.push_back({"collision events over " + std::to_string(runs) + " scenarios",
      static_cast<double>(collisions), 0.0, collisions == 0,
      std::to_string(open_loop_ticks) + " open-loop robot-ticks exercised"});
  r.checks.push_back({"min pairwise distance", min_dist, 1e-9, min_dist > 1e-9, ""});
  return r;
}

struct OutageComparison
{
  sim::SimulationLog with_horizons;
  sim::SimulationLog baseline;
};

inline OutageComparison run_outage_comparison(const sim::ScenarioConfig & base)
{
  auto on = base;
  on.baseline = false;
  auto off = base;
  off.baseline = true;
  return {sim::run_scenario(on), sim::run_scenario(off)};
}

/// Outage behaviour: with horizons the cut-off robots keep moving and stop
/// exactly when their horizon elapses; in baseline mode they stop at the first
/// missed tick.
inline SuiteReport verify_outage(const sim::ScenarioConfig & cfg = sim::outage_reproduction_config())
{
  SuiteReport r{"outage", {}};
  const auto cmp = run_outage_comparison(cfg);
  const double period = cfg.update_period;

  for (const auto & o : cmp.with_horizons.summary.outage_travel) {
    r.checks.push_back({"horizons: robot " + std::to_string(o.robot_id) + " travel during outage",
        o.distance, 0.0, o.distance > 0.0, ""});
  }
  // Every stop inside an outage must coincide with the stored horizon elapsing.
  std::size_t premature = 0;
  std::size_t overdue = 0;
  for (const auto & tr : cmp.with_horizons.ticks) {
    if (!cfg.failure.in_outage(tr.robot_id, tr.t)) {
      continue;
    }
    const double elapsed = static_cast<double>(tr.tick - tr.last_cmd_tick) * period;
    if (tr.mode == sim::Mode::kStopped && elapsed < tr.last_horizon) {
      ++premature;
    }
    if (tr.mode == sim::Mode::kOpenLoop && !(elapsed < tr.last_horizon)) {
      ++overdue;
    }
  }
  r.checks.push_back({"horizons: stops before horizon elapsed", static_cast<double>(premature), 0.0,
      premature == 0, ""});
  r.checks.push_back({"horizons: open-loop past horizon", static_cast<double>(overdue), 0.0,
      overdue == 0, ""});
  for (const auto & o : cmp.baseline.summary.outage_travel) {
    r.checks.push_back({"baseline: robot " + std::to_string(o.robot_id) + " travel during outage",
        o.distance, 0.0, o.distance == 0.0, ""});
  }
  std::size_t moving = 0;
  for (const auto & tr : cmp.baseline.ticks) {
    if (cfg.failure.in_outage(tr.robot_id, tr.t) && tr.mode != sim::Mode::kStopped) {
      ++moving;
    }
  }
  r.checks.push_back({"baseline: non-stopped ticks during outage", static_cast<double>(moving), 0.0,
      moving == 0, ""});
  r.checks.push_back({"collisions (horizons)",
      static_cast<double>(cmp.with_horizons.summary.collisions), 0.0,
      cmp.with_horizons.summary.collisions == 0, ""});
  r.checks.push_back({"collisions (baseline)", static_cast<double>(cmp.baseline.summary.collisions),
      0.0, cmp.baseline.summary.collisions == 0, ""});
  return r;
}

/// Two runs of the same configuration give byte-identical CSV.
inline SuiteReport verify_determinism(std::uint64_t seed = 11)
{
  SuiteReport r{"determinism", {}};
  const std::vector<sim::ScenarioConfig> cfgs{
    sim::outage_reproduction_config(), sim::random_scenario(seed), sim::random_scenario(seed + 1)};
  for (std::size_t k = 0; k < cfgs.size(); ++k) {
    const auto a = sim::log_to_csv(sim::run_scenario(cfgs[k]));
    const auto b = sim::log_to_csv(sim::run_scenario(cfgs[k]));
    r.checks.push_back({"scenario " + std::to_string(k) + " identical bytes",
        a == b ? 0.0 : 1.0, 0.0, a == b, std::to_string(a.size()) + " bytes"});
  }
  return r;
}

inline const std::vector<std::string> & suite_names()
{
  static const std::vector<std::string> names{
    "ellipse", "containment", "area", "jaccard", "derivative", "rollout", "theorem3", "outage",
    "determinism"};
  return names;
}

struct SuiteOptions
{
  int runs{100};
  std::uint64_t seed{7};
};

/// Run one suite by name; "all" runs every suite. Throws std::invalid_argument
/// for unknown names.
inline std::vector<SuiteReport> run_suite(const std::string & name, const SuiteOptions & opt = {})
{
  if (name == "all") {
    std::vector<SuiteReport> out;
    for (const auto & n : suite_names()) {
      auto part = run_suite(n, opt);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (name == "ellipse") {return {verify_ellipse()};}
  if (name == "containment") {return {verify_containment()};}
  if (name == "area") {return {verify_areas()};}
  if (name == "jaccard") {return {verify_jaccard()};}
  if (name == "derivative") {return {verify_derivative()};}
  if (name == "rollout") {return {verify_rollouts()};}
  if (name == "theorem3") {return {verify_fleet_safety(opt.runs, opt.seed)};}
  if (name == "outage") {return {verify_outage()};}
  if (name == "determinism") {return {verify_determinism(opt.seed)};}
  throw std::invalid_argument("unknown verification suite '" + name + "'");
}

}  // namespace safe_horizon::verify

#endif  // SAFE_HORIZON__VERIFY_HPP_

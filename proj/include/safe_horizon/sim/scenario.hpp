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

#ifndef SAFE_HORIZON__SIM__SCENARIO_HPP_
#define SAFE_HORIZON__SIM__SCENARIO_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "safe_horizon/format.hpp"
#include "safe_horizon/horizon.hpp"
#include "safe_horizon/sim/channel.hpp"
#include "safe_horizon/types.hpp"

namespace safe_horizon::sim
{

/// Invalid scenario configuration. `field()` is a dotted path such as
/// `robot[2].goal`; `line()` is the 1-based source line or 0 if unknown.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::string field, const std::string & message, std::size_t line = 0)
  : std::runtime_error(compose(field, message, line)), field_(std::move(field)), line_(line) {}

  const std::string & field() const {return field_;}
  std::size_t line() const {return line_;}

private:
  static std::string compose(const std::string & field, const std::string & message, std::size_t line)
  {
    std::string out = field.empty() ? std::string("config") : field;
    if (line > 0) {
      out += " (line " + std::to_string(line) + ")";
    }
    return out + ": " + message;
  }

  std::string field_;
  std::size_t line_;
};

/// Go-to-goal law and pairwise stop guard used by the decision maker.
struct ControllerParams
{
  double linear_gain{1.0};
  double angular_gain{2.0};
  double goal_tolerance{0.05};
  /// Extra separation the guard keeps beyond the collision radius.
  double guard_margin{0.05};
  /// Points per period at which the guard checks extrapolated distances.
  int guard_samples{16};
  /// Disabling the guard leaves only the horizons; used to exercise collision
  /// reporting.
  bool guard{true};
};

struct RobotSpec
{
  Pose start{};
  Vec2 goal{Vec2::Zero()};
  /// Command assumed by one-shot horizon queries; the simulator ignores it.
  VelocityCommand command{};
};

struct ScenarioConfig
{
  std::vector<RobotSpec> robots;
  std::vector<horizon::Obstacle> obstacles;
  /// delta: decision-maker period.
  double update_period{0.1};
  /// L: horizon cap.
  double horizon_cap{3.0};
  double duration{10.0};
  int substeps_per_tick{10};
  double collision_radius{0.0};
  /// Force every transmitted horizon to 0 (stop on first missed packet).
  bool baseline{false};
  horizon::SolverOptions solver{};
  ControllerParams controller{};
  FailureModel failure{};

  /// Solver options actually used for horizons: clearance = collision radius.
  horizon::SolverOptions horizon_options() const
  {
    auto o = solver;
    o.clearance = collision_radius;
    return o;
  }

  long long tick_count() const
  {
    return static_cast<long long>(std::ceil(duration / update_period - 1e-9));
  }

  void validate() const
  {
    auto positive = [](double v, const char * field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw ConfigError(field, "must be positive");
        }
      };
    positive(update_period, "scenario.update_period");
    positive(horizon_cap, "scenario.horizon_cap");
    positive(duration, "scenario.duration");
    if (substeps_per_tick < 1) {
      throw ConfigError("scenario.substeps_per_tick", "must be >= 1");
    }
    if (!(collision_radius >= 0.0)) {
      throw ConfigError("scenario.collision_radius", "must be non-negative");
    }
    positive(solver.step, "solver.scan_step");
    positive(solver.tolerance, "solver.scan_tolerance");
    if (!(solver.margin_factor >= 0.0)) {
      throw ConfigError("solver.margin_factor", "must be non-negative");
    }
    if (controller.guard_samples < 1) {
      throw ConfigError("controller.guard_samples", "must be >= 1");
    }
    if (!(controller.guard_margin > update_period / controller.guard_samples)) {
      throw ConfigError(
              "controller.guard_margin",
              "must exceed update_period / guard_samples so sampled checks bound the gap");
    }
    positive(controller.linear_gain, "controller.linear_gain");
    positive(controller.angular_gain, "controller.angular_gain");
    if (!(controller.goal_tolerance >= 0.0)) {
      throw ConfigError("controller.goal_tolerance", "must be non-negative");
    }
    if (!(failure.drop_probability >= 0.0 && failure.drop_probability <= 1.0)) {
      throw ConfigError("failure.drop_probability", "must be in [0, 1]");
    }
    if (robots.empty()) {
      throw ConfigError("robot", "at least one robot is required");
    }
    for (const auto & o : failure.outages) {
      const std::string path = "robot[" + std::to_string(o.robot_id) + "].outage";
      if (o.robot_id < 0 || static_cast<std::size_t>(o.robot_id) >= robots.size()) {
        throw ConfigError(path, "refers to an unknown robot");
      }
      if (!(o.start >= 0.0) || !(o.start < o.end)) {
        throw ConfigError(path, "must satisfy 0 <= start < end");
      }
    }
    for (std::size_t i = 0; i < robots.size(); ++i) {
      if (!robots[i].command.admissible()) {
        throw ConfigError("robot[" + std::to_string(i) + "].command", "speeds must be within [-1, 1]");
      }
      for (std::size_t j = i + 1; j < robots.size(); ++j) {
        const double d = (robots[i].start.position - robots[j].start.position).norm();
        if (!(d > collision_radius) || d <= 1e-9) {
          throw ConfigError(
                  "robot[" + std::to_string(j) + "].start",
                  "overlaps robot " + std::to_string(i) + " at the initial time");
        }
      }
      for (std::size_t o = 0; o < obstacles.size(); ++o) {
        if ((robots[i].start.position - obstacles[o].position).norm() <= obstacles[o].radius) {
          throw ConfigError(
                  "robot[" + std::to_string(i) + "].start",
                  "inside obstacle " + std::to_string(o));
        }
      }
    }
    for (std::size_t o = 0; o < obstacles.size(); ++o) {
      if (!(obstacles[o].radius >= 0.0)) {
        throw ConfigError("obstacle[" + std::to_string(o) + "].radius", "must be non-negative");
      }
    }
  }
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {s.remove_prefix(1);}
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<double> parse_tuple(
  std::string_view value, std::size_t expected, const std::string & field, std::size_t line)
{
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = value.find(',', pos);
    const auto token = value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos);
    const auto num = parse_number(token);
    if (!num || !std::isfinite(*num)) {
      throw ConfigError(field, "expected a number, got '" + std::string(trim(token)) + "'", line);
    }
    out.push_back(*num);
    if (comma == std::string_view::npos) {
      break;
    }
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw ConfigError(
            field, "expected " + std::to_string(expected) + " comma-separated numbers", line);
  }
  return out;
}

inline bool parse_bool(std::string_view value, const std::string & field, std::size_t line)
{
  if (value == "true" || value == "1" || value == "yes") {return true;}
  if (value == "false" || value == "0" || value == "no") {return false;}
  throw ConfigError(field, "expected true or false", line);
}

}  // namespace detail

/// Parse the flat `[section]` / `key = value` scenario format. Sections:
/// scenario, solver, controller, failure (once each) and robot, obstacle
/// (repeatable, indexed in order of appearance). `#` and `;` start comments.
inline ScenarioConfig parse_config(std::istream & in)
{
  ScenarioConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::string raw;
  std::vector<bool> robot_has_start;
  std::vector<bool> obstacle_has_position;

  auto section_path = [&]() {
      if (section == "robot") {
        return "robot[" + std::to_string(cfg.robots.size() - 1) + "]";
      }
      if (section == "obstacle") {
        return "obstacle[" + std::to_string(cfg.obstacles.size() - 1) + "]";
      }
      return section;
    };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("", "unterminated section header", line_no);
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section == "robot") {
        cfg.robots.emplace_back();
        robot_has_start.push_back(false);
      } else if (section == "obstacle") {
        cfg.obstacles.emplace_back();
        obstacle_has_position.push_back(false);
      } else if (section != "scenario" && section != "solver" && section != "controller" &&
        section != "failure")
      {
        throw ConfigError(section, "unknown section", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(section, "expected key = value", line_no);
    }
    if (section.empty()) {
      throw ConfigError("", "key outside of any section", line_no);
    }
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string_view value = detail::trim(line.substr(eq + 1));
    const std::string field = section_path() + "." + key;

    auto number = [&]() {return detail::parse_tuple(value, 1, field, line_no)[0];};
    auto integer = [&]() {
        const auto v = parse_integer(value);
        if (!v) {
          throw ConfigError(field, "expected an integer", line_no);
        }
        return *v;
      };

    if (section == "scenario") {
      if (key == "update_period") {cfg.update_period = number();}
      else if (key == "horizon_cap") {cfg.horizon_cap = number();}
      else if (key == "duration") {cfg.duration = number();}
      else if (key == "substeps_per_tick") {cfg.substeps_per_tick = static_cast<int>(integer());}
      else if (key == "collision_radius") {cfg.collision_radius = number();}
      else if (key == "baseline") {cfg.baseline = detail::parse_bool(value, field, line_no);}
      else if (key == "seed") {
        const auto seed = parse_integer<std::uint64_t>(value);
        if (!seed) {
          throw ConfigError(field, "expected a non-negative 64-bit integer", line_no);
        }
        cfg.failure.seed = *seed;
      } else {
        throw ConfigError(field, "unknown key", line_no);
      }
    } else if (section == "solver") {
      if (key == "scan_step") {cfg.solver.step = number();}
      else if (key == "scan_tolerance") {cfg.solver.tolerance = number();}
      else if (key == "margin_factor") {cfg.solver.margin_factor = number();}
      else {throw ConfigError(field, "unknown key", line_no);}
    } else if (section == "controller") {
      if (key == "linear_gain") {cfg.controller.linear_gain = number();}
      else if (key == "angular_gain") {cfg.controller.angular_gain = number();}
      else if (key == "goal_tolerance") {cfg.controller.goal_tolerance = number();}
      else if (key == "guard_margin") {cfg.controller.guard_margin = number();}
      else if (key == "guard_samples") {cfg.controller.guard_samples = static_cast<int>(integer());}
      else if (key == "guard") {cfg.controller.guard = detail::parse_bool(value, field, line_no);}
      else {throw ConfigError(field, "unknown key", line_no);}
    } else if (section == "failure") {
      if (key == "drop_probability") {cfg.failure.drop_probability = number();}
      else {throw ConfigError(field, "unknown key", line_no);}
    } else if (section == "robot") {
      auto & r = cfg.robots.back();
      const int id = static_cast<int>(cfg.robots.size() - 1);
      if (key == "start") {
        const auto v = detail::parse_tuple(value, 3, field, line_no);
        r.start = Pose{v[0], v[1], v[2]};
        robot_has_start.back() = true;
      } else if (key == "goal") {
        const auto v = detail::parse_tuple(value, 2, field, line_no);
        r.goal = Vec2{v[0], v[1]};
      } else if (key == "command") {
        const auto v = detail::parse_tuple(value, 2, field, line_no);
        r.command = VelocityCommand{v[0], v[1]};
        if (!r.command.admissible()) {
          throw ConfigError(field, "speeds must be within [-1, 1]", line_no);
        }
      } else if (key == "outage") {
        const auto v = detail::parse_tuple(value, 2, field, line_no);
        if (!(v[0] >= 0.0) || !(v[0] < v[1])) {
          throw ConfigError(field, "must satisfy 0 <= start < end", line_no);
        }
        cfg.failure.outages.push_back(Outage{id, v[0], v[1]});
      } else {
        throw ConfigError(field, "unknown key", line_no);
      }
    } else if (section == "obstacle") {
      auto & o = cfg.obstacles.back();
      if (key == "position") {
        const auto v = detail::parse_tuple(value, 2, field, line_no);
        o.position = Vec2{v[0], v[1]};
        obstacle_has_position.back() = true;
      } else if (key == "radius") {
        o.radius = number();
      } else {
        throw ConfigError(field, "unknown key", line_no);
      }
    }
  }
  for (std::size_t i = 0; i < robot_has_start.size(); ++i) {
    if (!robot_has_start[i]) {
      throw ConfigError("robot[" + std::to_string(i) + "].start", "missing");
    }
  }
  for (std::size_t i = 0; i < obstacle_has_position.size(); ++i) {
    if (!obstacle_has_position[i]) {
      throw ConfigError("obstacle[" + std::to_string(i) + "].position", "missing");
    }
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig parse_config(std::string_view text)
{
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

inline ScenarioConfig load_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", "cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

/// Inverse of parse_config (9 significant digits).
inline std::string format_config(const ScenarioConfig & cfg)
{
  auto n = [](double v) {return format_number(v);};
  std::ostringstream out;
  out << "[scenario]\n"
      << "update_period = " << n(cfg.update_period) << '\n'
      << "horizon_cap = " << n(cfg.horizon_cap) << '\n'
      << "duration = " << n(cfg.duration) << '\n'
      << "substeps_per_tick = " << cfg.substeps_per_tick << '\n'
      << "collision_radius = " << n(cfg.collision_radius) << '\n'
      << "baseline = " << (cfg.baseline ? "true" : "false") << '\n'
      << "seed = " << cfg.failure.seed << "\n\n"
      << "[solver]\n"
      << "scan_step = " << n(cfg.solver.step) << '\n'
      << "scan_tolerance = " << n(cfg.solver.tolerance) << '\n'
      << "margin_factor = " << n(cfg.solver.margin_factor) << "\n\n"
      << "[controller]\n"
      << "linear_gain = " << n(cfg.controller.linear_gain) << '\n'
      << "angular_gain = " << n(cfg.controller.angular_gain) << '\n'
      << "goal_tolerance = " << n(cfg.controller.goal_tolerance) << '\n'
      << "guard_margin = " << n(cfg.controller.guard_margin) << '\n'
      << "guard_samples = " << cfg.controller.guard_samples << '\n'
      << "guard = " << (cfg.controller.guard ? "true" : "false") << "\n\n"
      << "[failure]\n"
      << "drop_probability = " << n(cfg.failure.drop_probability) << '\n';
  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    const auto & r = cfg.robots[i];
    out << "\n[robot]\n"
        << "start = " << n(r.start.position.x()) << ", " << n(r.start.position.y()) << ", "
        << n(r.start.heading) << '\n'
        << "goal = " << n(r.goal.x()) << ", " << n(r.goal.y()) << '\n';
    if (!r.command.is_zero()) {
      out << "command = " << n(r.command.linear) << ", " << n(r.command.angular) << '\n';
    }
    for (const auto & o : cfg.failure.outages) {
      if (o.robot_id == static_cast<int>(i)) {
        out << "outage = " << n(o.start) << ", " << n(o.end) << '\n';
      }
    }
  }
  for (const auto & o : cfg.obstacles) {
    out << "\n[obstacle]\n"
        << "position = " << n(o.position.x()) << ", " << n(o.position.y()) << '\n'
        << "radius = " << n(o.radius) << '\n';
  }
  return out.str();
}

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__SCENARIO_HPP_

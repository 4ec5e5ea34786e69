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

#ifndef SAFE_HORIZON__TOOLS__CLI_APP_HPP_
#define SAFE_HORIZON__TOOLS__CLI_APP_HPP_

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "safe_horizon/ellipse.hpp"
#include "safe_horizon/format.hpp"
#include "safe_horizon/geometry.hpp"
#include "safe_horizon/horizon.hpp"
#include "safe_horizon/sim/decision_maker.hpp"
#include "safe_horizon/sim/scenario.hpp"
#include "safe_horizon/sim/scenarios.hpp"
#include "safe_horizon/sim/simulation.hpp"
#include "safe_horizon/verify.hpp"

namespace safe_horizon::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitViolation = 3;

inline constexpr const char * kOutputEnv = "SAFE_HORIZON_OUT";

/// Reported as exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::vector<double> times;
  std::string config;
  bool baseline{false};
  std::optional<std::uint64_t> seed;
  std::string out{"out"};
  int runs{100};
  std::string suite;
};

/// SAFE_HORIZON_OUT wins over --out when set and non-empty.
inline std::filesystem::path output_dir(const Options & o)
{
  const char * env = std::getenv(kOutputEnv);
  std::filesystem::path dir = (env != nullptr && *env != '\0') ? env : o.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw UsageError("output directory '" + dir.string() + "' is not writable");
  }
  return dir;
}

inline void write_file(const std::filesystem::path & path, const std::string & content)
{
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw UsageError("cannot write '" + path.string() + "'");
  }
  f << content;
  if (!f) {
    throw UsageError("write failed for '" + path.string() + "'");
  }
}

inline void require_times(const std::vector<double> & times)
{
  if (times.empty()) {
    throw UsageError("--t: at least one time is required");
  }
  for (double t : times) {
    if (!std::isfinite(t) || !(t > 0.0)) {
      throw UsageError("--t: time must be finite and > 0, got " + format_number(t));
    }
  }
}

/// First-quadrant K(t) area; the closed form only covers t > pi/2.
inline double kset_area_q1(double t)
{
  if (t > kHalfPi) {
    return geometry::kset_area_first_quadrant(t);
  }
  const auto ring = geometry::kset_boundary_polyline(t);
  return geometry::polygon_area(ring) / 4.0;
}

inline double hull_area_q1(double t)
{
  return t > kHalfPi ? geometry::hull_area_first_quadrant(t) : geometry::hull_area_polygon(t) / 4.0;
}

inline sim::ScenarioConfig scenario_from(const Options & o)
{
  sim::ScenarioConfig cfg =
    o.config.empty() ? sim::outage_reproduction_config() : sim::load_config(o.config);
  if (o.baseline) {
    cfg.baseline = true;
  }
  if (o.seed) {
    cfg.failure.seed = *o.seed;
  }
  cfg.validate();
  return cfg;
}

inline int cmd_ellipse(const Options & o, std::ostream & out)
{
  require_times(o.times);
  const auto dir = output_dir(o);
  std::ostringstream params;
  ellipse::write_params_csv(params, o.times);
  write_file(dir / "ellipse_params.csv", params.str());
  for (double t : o.times) {
    const ellipse::HorizonEllipse e(t);
    std::ostringstream ring;
    const auto pts = e.boundary_polyline(256);
    geometry::write_polyline_csv(ring, pts);
    write_file(dir / ("ellipse_boundary_t" + format_number(t) + ".csv"), ring.str());
  }
  out << params.str();
  return kExitOk;
}

inline int cmd_hull(const Options & o, std::ostream & out)
{
  require_times(o.times);
  const auto dir = output_dir(o);
  std::ostringstream table;
  table << "t,hull_area_q1,kset_area_q1\n";
  for (double t : o.times) {
    std::ostringstream hull;
    std::ostringstream kset;
    const auto h = geometry::hull_boundary_polyline(t);
    const auto k = geometry::kset_boundary_polyline(t);
    geometry::write_polyline_csv(hull, h);
    geometry::write_polyline_csv(kset, k);
    write_file(dir / ("hull_boundary_t" + format_number(t) + ".csv"), hull.str());
    write_file(dir / ("kset_boundary_t" + format_number(t) + ".csv"), kset.str());
    table << format_number(t) << ',' << format_number(hull_area_q1(t)) << ','
          << format_number(kset_area_q1(t)) << '\n';
  }
  write_file(dir / "hull_areas.csv", table.str());
  out << table.str();
  return kExitOk;
}

inline int cmd_jaccard(const Options & o, std::ostream & out)
{
  const std::vector<double> times = o.times.empty() ? std::vector<double>{5.0, 10.0, 25.0} : o.times;
  require_times(times);
  const auto dir = output_dir(o);
  std::ostringstream table;
  table << "t,hull_area_q1,kset_area_q1,ellipse_area_q1,dj_hull_kset,dj_hull_ellipse\n";
  for (double t : times) {
    const double hull = hull_area_q1(t);
    const double kset = kset_area_q1(t);
    const double xi = ellipse::area_first_quadrant(t);
    table << format_number(t) << ',' << format_number(hull) << ',' << format_number(kset) << ','
          << format_number(xi) << ',' << format_number(geometry::jaccard_nested(hull, kset)) << ','
          << format_number(geometry::jaccard_nested(hull, xi)) << '\n';
  }
  write_file(dir / "jaccard.csv", table.str());
  out << table.str();
  return kExitOk;
}

/// Horizons for every robot of the configured fleet at its start pose. Each
/// robot repeats its configured command, or the go-to-goal command if none is
/// given. A single --t overrides the horizon cap.
inline int cmd_safetime(const Options & o, std::ostream & out)
{
  auto cfg = scenario_from(o);
  if (o.times.size() > 1) {
    throw UsageError("--t: safetime takes a single horizon cap");
  }
  if (!o.times.empty()) {
    require_times(o.times);
    cfg.horizon_cap = o.times.front();
  }
  const auto dir = output_dir(o);
  std::vector<horizon::RobotSnapshot> fleet;
  for (const auto & r : cfg.robots) {
    const auto cmd =
      r.command.is_zero() ? sim::go_to_goal(r.start, r.goal, cfg.controller) : r.command;
    fleet.push_back({r.start, cmd});
  }
  std::ostringstream table;
  table << "robot_id,horizon,quantized,limiting_neighbor,limiting_obstacle\n";
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const auto res =
      horizon::safe_horizon(fleet, i, cfg.horizon_cap, cfg.horizon_options(), cfg.obstacles);
    table << i << ',' << format_number(res.horizon) << ','
          << format_number(sim::quantize_horizon(res.horizon, cfg.update_period)) << ','
          << (res.limiting_neighbor ? std::to_string(*res.limiting_neighbor) : std::string()) << ','
          << (res.limiting_obstacle ? std::to_string(*res.limiting_obstacle) : std::string())
          << '\n';
  }
  write_file(dir / "safetime.csv", table.str());
  out << table.str();
  return kExitOk;
}

inline int cmd_simulate(const Options & o, std::ostream & out)
{
  const auto cfg = scenario_from(o);
  const auto dir = output_dir(o);
  const auto log = sim::run_scenario(cfg);
  write_file(dir / "sim_log.csv", sim::log_to_csv(log));
  std::ostringstream summary;
  summary << "mode: " << (cfg.baseline ? "baseline" : "horizons") << '\n';
  sim::write_summary(summary, log.summary);
  write_file(dir / "sim_summary.txt", summary.str());
  out << summary.str();
  return log.summary.collisions == 0 ? kExitOk : kExitViolation;
}

inline int cmd_verify(const Options & o, std::ostream & out)
{
  if (o.runs < 1) {
    throw UsageError("--runs must be >= 1");
  }
  verify::SuiteOptions opt;
  opt.runs = o.runs;
  if (o.seed) {
    opt.seed = *o.seed;
  }
  std::vector<verify::SuiteReport> reports;
  try {
    reports = verify::run_suite(o.suite, opt);
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  bool ok = true;
  for (const auto & r : reports) {
    verify::write_report(out, r);
    ok = ok && r.passed();
  }
  out << (ok ? "verify: PASS\n" : "verify: FAIL\n");
  return ok ? kExitOk : kExitViolation;
}

/// Parse and dispatch. Returns the process exit code.
inline int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Guaranteed-safe open-loop horizons for differential-drive fleets", "safe_horizon"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_out = [&o](CLI::App * sub) {
      sub->add_option("--out", o.out, "Output directory (SAFE_HORIZON_OUT overrides)");
    };
  auto add_times = [&o](CLI::App * sub, const std::string & help) {
      sub->add_option("--t", o.times, help)->delimiter(',')->allow_extra_args(false);
    };
  auto add_scenario = [&o](CLI::App * sub) {
      sub->add_option("--config", o.config, "Scenario file")->check(CLI::ExistingFile);
      sub->add_option("--seed", o.seed, "Channel seed override");
    };

  auto * ellipse_cmd = app.add_subcommand("ellipse", "Ellipse parameters and boundaries");
  add_times(ellipse_cmd, "Horizon times (repeat or comma-separate)");
  add_out(ellipse_cmd);

  auto * hull_cmd = app.add_subcommand("hull", "Hull and K-set boundaries and areas");
  add_times(hull_cmd, "Horizon times (repeat or comma-separate)");
  add_out(hull_cmd);

  auto * jaccard_cmd = app.add_subcommand("jaccard", "Jaccard distances to the hull");
  add_times(jaccard_cmd, "Horizon times (default 5,10,25)");
  add_out(jaccard_cmd);

  auto * safetime_cmd = app.add_subcommand("safetime", "Horizons at the configured start poses");
  add_scenario(safetime_cmd);
  add_times(safetime_cmd, "Horizon cap override");
  add_out(safetime_cmd);

  auto * simulate_cmd = app.add_subcommand("simulate", "Run a scenario and log it");
  add_scenario(simulate_cmd);
  simulate_cmd->add_flag("--baseline", o.baseline, "Stop at the first missed packet");
  add_out(simulate_cmd);

  auto * verify_cmd = app.add_subcommand("verify", "Run oracle verification suites");
  verify_cmd->add_option("suite", o.suite, "Suite name or 'all'")->required();
  verify_cmd->add_option("--runs", o.runs, "Scenarios for the randomized safety suite");
  verify_cmd->add_option("--seed", o.seed, "Seed for the randomized safety suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*ellipse_cmd) {return cmd_ellipse(o, out);}
    if (*hull_cmd) {return cmd_hull(o, out);}
    if (*jaccard_cmd) {return cmd_jaccard(o, out);}
    if (*safetime_cmd) {return cmd_safetime(o, out);}
    if (*simulate_cmd) {return cmd_simulate(o, out);}
    return cmd_verify(o, out);
  } catch (const sim::ConfigError & e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace safe_horizon::cli

#endif  // SAFE_HORIZON__TOOLS__CLI_APP_HPP_

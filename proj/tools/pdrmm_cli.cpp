// Batch front end for the PDR + map-matching pipeline:
//   simulate | pdr | match | eval | run-all
// Exit codes: 0 ok, 1 parse, 2 config, 3 pipeline-empty, 4 match-mismatch,
// 5 I/O.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdrmm/pdrmm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunOptions {
  std::string imu_path;
  std::string route_path;
  std::string out_dir = ".";
  pdrmm::PdrConfig pdr;
  pdrmm::MatchParams match;
  pdrmm::CsvLayout layout = pdrmm::CsvLayout::standard();
};

json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw pdrmm::IoError(std::string("cannot open ") + what + " '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw pdrmm::ParseError(std::string(what) + " '" + path +
                            "' is not valid JSON: " + e.what());
  }
  return j;
}

RunOptions load_run_config(const std::string& path) {
  const json j = read_json_file(path, "run config");
  RunOptions opt;
  opt.imu_path = j.value("imu", "");
  opt.route_path = j.value("route", "");
  opt.out_dir = j.value("out", opt.out_dir);
  if (j.contains("origin")) {
    const auto& o = j.at("origin");
    opt.pdr.x0 = o.value("x", 0.0);
    opt.pdr.y0 = o.value("y", 0.0);
    opt.pdr.phi0 = o.value("phi", 0.0);
  }
  if (j.contains("step_detection")) {
    const auto& d = j.at("step_detection");
    opt.pdr.detect.min_peak = d.value("min_peak", opt.pdr.detect.min_peak);
    opt.pdr.detect.refractory_s = d.value("refractory_s", opt.pdr.detect.refractory_s);
    opt.pdr.smooth_window = d.value("smooth_window", opt.pdr.smooth_window);
    opt.pdr.detrend = d.value("detrend", opt.pdr.detrend);
    opt.pdr.detrend_window_s = d.value("detrend_window_s", opt.pdr.detrend_window_s);
  }
  if (j.contains("step_model"))
    opt.pdr.model = pdrmm::StepLengthModel::parse(j.at("step_model").get<std::string>());
  if (j.contains("turn")) {
    const auto& t = j.at("turn");
    if (t.contains("threshold_deg"))
      opt.match.turn.threshold_rad = pdrmm::deg_to_rad(t.at("threshold_deg").get<double>());
    opt.match.turn.window = t.value("window_steps", opt.match.turn.window);
  }
  opt.match.scale = j.value("scale", opt.match.scale);
  if (j.contains("columns")) {
    const auto& c = j.at("columns");
    for (const char* key : {"t", "ax", "ay", "az", "gx", "gy", "gz"})
      if (!c.contains(key))
        throw pdrmm::ConfigError(std::string("column mapping missing field \"") +
                                 key + "\"");
    opt.layout = pdrmm::CsvLayout::mapped(
        c.at("t").get<int>(), c.at("ax").get<int>(), c.at("ay").get<int>(),
        c.at("az").get<int>(), c.at("gx").get<int>(), c.at("gy").get<int>(),
        c.at("gz").get<int>(), c.value("has_header", true));
  }
  return opt;
}

pdrmm::SampleStream load_imu(const std::string& path, const pdrmm::CsvLayout& layout) {
  std::ifstream in(path);
  if (!in) throw pdrmm::IoError("cannot open IMU log '" + path + "'");
  return pdrmm::parse_imu_log(in, layout);
}

pdrmm::RouteMap load_route_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pdrmm::IoError("cannot open route file '" + path + "'");
  return pdrmm::load_route(in);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw pdrmm::IoError("cannot write '" + path.string() + "'");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  out.flush();
  if (!out) throw pdrmm::IoError("failed writing '" + path.string() + "'");
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pdrmm::IoError("cannot create output directory '" + dir + "'");
}

std::vector<pdrmm::TrackPoint> full_track(const pdrmm::TrackPoint& origin,
                                          const std::vector<pdrmm::TrackPoint>& points) {
  std::vector<pdrmm::TrackPoint> all;
  all.reserve(points.size() + 1);
  all.push_back(origin);
  all.insert(all.end(), points.begin(), points.end());
  return all;
}

pdrmm::Trajectory trajectory_from_rows(std::vector<pdrmm::TrackPoint> rows) {
  if (rows.empty()) throw pdrmm::EmptyInputError("trajectory file contains no points");
  pdrmm::Trajectory traj;
  traj.origin = rows.front();
  traj.points.assign(rows.begin() + 1, rows.end());
  if (traj.points.empty())
    throw pdrmm::EmptyTrajectoryError("trajectory has an origin but no steps");
  return traj;
}

json stats_to_json(const pdrmm::ErrorStats& stats) {
  json j;
  j["mean_m"] = stats.mean;
  j["std_m"] = stats.std_dev;
  j["max_m"] = stats.max;
  j["loop_gap_m"] = stats.loop_gap ? json(*stats.loop_gap) : json(nullptr);
  return j;
}

json match_report(const pdrmm::MatchedTrajectory& matched, std::size_t turns,
                  std::size_t corners, bool scale_enabled) {
  json j;
  j["turns"] = turns;
  j["interior_corners"] = corners;
  j["scale_enabled"] = scale_enabled;
  j["segments"] = json::array();
  for (const auto& s : matched.segments) {
    json seg;
    seg["first"] = s.first;
    seg["last"] = s.last;
    seg["pivot"] = {s.pivot.x, s.pivot.y};
    seg["theta_rad"] = s.theta;
    seg["scale"] = s.scale;
    seg["corner"] = {s.corner.x, s.corner.y};
    j["segments"].push_back(seg);
  }
  return j;
}

std::string csv_of_track(std::span<const pdrmm::TrackPoint> points) {
  std::ostringstream os;
  pdrmm::write_trajectory_csv(points, os);
  return os.str();
}

std::string csv_of_stream(const pdrmm::SampleStream& stream) {
  std::ostringstream os;
  pdrmm::write_imu_log(stream, os);
  return os.str();
}

std::string csv_of_cdf(const pdrmm::ErrorStats& stats) {
  std::ostringstream os;
  pdrmm::export_cdf(stats, os);
  return os.str();
}

struct SimulateOutputs {
  pdrmm::WalkScenario scenario;
  pdrmm::SimResult sim;
};

SimulateOutputs run_simulation(const std::string& scenario_path,
                               std::optional<std::uint64_t> seed_override) {
  auto scenario = pdrmm::scenario_from_json(read_json_file(scenario_path, "scenario"));
  if (seed_override) scenario.seed = *seed_override;
  SimulateOutputs out{scenario, pdrmm::simulate(scenario)};
  return out;
}

json scenario_lock(const SimulateOutputs& s) {
  json lock = pdrmm::scenario_to_json(s.scenario);
  lock["derived"]["true_initial_heading"] = s.sim.true_initial_heading;
  lock["derived"]["step_count"] = s.sim.truth.size() - 1;
  lock["derived"]["turn_schedule"] = s.sim.turn_schedule;
  return lock;
}

void write_simulation(const SimulateOutputs& s, const std::string& out_dir) {
  ensure_out_dir(out_dir);
  const fs::path dir(out_dir);
  write_text(dir / "imu.csv", csv_of_stream(s.sim.stream));
  write_text(dir / "truth.csv", csv_of_track(s.sim.truth));
  write_text(dir / "scenario.lock.json", scenario_lock(s).dump(2) + "\n");
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
  const auto s = run_simulation(scenario_path, seed_override);
  write_simulation(s, out_dir);
  std::cout << "simulated " << s.sim.truth.size() - 1 << " steps, "
            << s.sim.stream.size() << " samples\n";
  return 0;
}

int cmd_pdr(const RunOptions& opt) {
  if (opt.imu_path.empty()) throw pdrmm::ConfigError("no IMU log given (--imu)");
  const auto stream = load_imu(opt.imu_path, opt.layout);
  const auto traj = pdrmm::run_pdr(stream, opt.pdr);
  ensure_out_dir(opt.out_dir);
  write_text(fs::path(opt.out_dir) / "pdr_traj.csv",
             csv_of_track(full_track(traj.origin, traj.points)));
  std::cout << "steps: " << traj.step_count() << "\n";
  return 0;
}

int cmd_match(const RunOptions& opt, const std::string& traj_path) {
  if (opt.route_path.empty()) throw pdrmm::ConfigError("no route file given (--route)");
  const auto route = load_route_file(opt.route_path);

  pdrmm::Trajectory traj;
  if (!traj_path.empty()) {
    std::ifstream in(traj_path);
    if (!in) throw pdrmm::IoError("cannot open trajectory '" + traj_path + "'");
    traj = trajectory_from_rows(pdrmm::read_trajectory_csv(in));
  } else {
    if (opt.imu_path.empty())
      throw pdrmm::ConfigError("match needs --traj or an IMU log to run PDR on");
    traj = pdrmm::run_pdr(load_imu(opt.imu_path, opt.layout), opt.pdr);
  }

  const auto turns = pdrmm::detect_turns(traj, opt.match.turn);
  const auto matched = pdrmm::match_trajectory(traj, route, opt.match);
  ensure_out_dir(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_text(dir / "matched_traj.csv",
             csv_of_track(full_track(matched.origin, matched.points)));
  write_text(dir / "match_report.json",
             match_report(matched, turns.size(),
                          pdrmm::interior_corner_indices(route).size(),
                          opt.match.scale)
                     .dump(2) +
                 "\n");
  std::cout << "matched " << turns.size() << " turns over "
            << matched.segments.size() << " segments\n";
  return 0;
}

int cmd_eval(const RunOptions& opt, const std::string& traj_path,
             const std::string& baseline_path) {
  if (opt.route_path.empty()) throw pdrmm::ConfigError("no route file given (--route)");
  if (traj_path.empty()) throw pdrmm::ConfigError("no trajectory given (--traj)");
  const auto route = load_route_file(opt.route_path);

  auto load_rows = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pdrmm::IoError("cannot open trajectory '" + path + "'");
    return pdrmm::read_trajectory_csv(in);
  };
  const auto rows = load_rows(traj_path);
  const auto stats = pdrmm::evaluate(rows, route);

  json out_stats;
  std::optional<pdrmm::ErrorStats> base_stats;
  if (!baseline_path.empty()) {
    base_stats = pdrmm::evaluate(load_rows(baseline_path), route);
    out_stats["pdr"] = stats_to_json(*base_stats);
    out_stats["matched"] = stats_to_json(stats);
    out_stats["matched"]["reduction_vs"] = pdrmm::reduction_ratio(*base_stats, stats);
  } else {
    out_stats = stats_to_json(stats);
  }

  ensure_out_dir(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_text(dir / "stats.json", out_stats.dump(2) + "\n");
  write_text(dir / "cdf.csv", csv_of_cdf(stats));
  if (base_stats) write_text(dir / "pdr_cdf.csv", csv_of_cdf(*base_stats));
  std::cout << "mean error: " << stats.mean << " m\n";
  return 0;
}

int cmd_run_all(const std::string& scenario_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override,
                const pdrmm::PdrConfig& pdr_base, const pdrmm::MatchParams& match_params,
                bool step_model_set) {
  const auto s = run_simulation(scenario_path, seed_override);

  pdrmm::PdrConfig pdr = pdr_base;
  pdr.x0 = s.scenario.route.corners.front().x;
  pdr.y0 = s.scenario.route.corners.front().y;
  pdr.phi0 = s.sim.true_initial_heading + s.scenario.initial_heading_bias;
  if (!step_model_set)
    pdr.model = pdrmm::StepLengthModel::fixed(s.scenario.step_len_m);

  const auto traj = pdrmm::run_pdr(s.sim.stream, pdr);
  const auto turns = pdrmm::detect_turns(traj, match_params.turn);
  const auto matched = pdrmm::match_trajectory(traj, s.scenario.route, match_params);

  const auto pdr_track = full_track(traj.origin, traj.points);
  const auto matched_track = full_track(matched.origin, matched.points);
  const auto pdr_stats = pdrmm::evaluate(pdr_track, s.scenario.route);
  const auto matched_stats = pdrmm::evaluate(matched_track, s.scenario.route);

  json stats;
  stats["pdr"] = stats_to_json(pdr_stats);
  stats["matched"] = stats_to_json(matched_stats);
  stats["matched"]["reduction_vs"] = pdrmm::reduction_ratio(pdr_stats, matched_stats);

  // Everything computed; write the whole artifact set in one pass.
  write_simulation(s, out_dir);
  const fs::path dir(out_dir);
  write_text(dir / "pdr_traj.csv", csv_of_track(pdr_track));
  write_text(dir / "matched_traj.csv", csv_of_track(matched_track));
  write_text(dir / "match_report.json",
             match_report(matched, turns.size(),
                          pdrmm::interior_corner_indices(s.scenario.route).size(),
                          match_params.scale)
                     .dump(2) +
                 "\n");
  write_text(dir / "stats.json", stats.dump(2) + "\n");
  write_text(dir / "cdf.csv", csv_of_cdf(matched_stats));
  write_text(dir / "pdr_cdf.csv", csv_of_cdf(pdr_stats));

  std::cout << "pdr mean " << pdr_stats.mean << " m, matched mean "
            << matched_stats.mean << " m, reduction "
            << pdrmm::reduction_ratio(pdr_stats, matched_stats) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pedestrian dead reckoning with corner-point map matching"};
  app.require_subcommand(1);

  std::string config_path, imu_path, route_path, out_dir, traj_path, baseline_path;
  std::string step_model, scale_mode;
  double turn_threshold_deg = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd, bool with_pipeline_flags) {
    cmd->add_option("--config", config_path, "run-config or scenario JSON");
    cmd->add_option("--out", out_dir, "output directory");
    if (with_pipeline_flags) {
      cmd->add_option("--step-model", step_model, "fixed:<m> | weinberg:<K>");
      cmd->add_option("--turn-threshold", turn_threshold_deg, "degrees");
      cmd->add_option("--scale", scale_mode, "on | off")
          ->check(CLI::IsMember({"on", "off"}));
    }
  };

  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic walk");
  add_common(sim_cmd, false);
  sim_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* pdr_cmd = app.add_subcommand("pdr", "dead-reckon a trajectory from an IMU log");
  add_common(pdr_cmd, true);
  pdr_cmd->add_option("--imu", imu_path, "IMU log CSV");

  auto* match_cmd = app.add_subcommand("match", "correct a trajectory against a route");
  add_common(match_cmd, true);
  match_cmd->add_option("--imu", imu_path, "IMU log CSV");
  match_cmd->add_option("--route", route_path, "route JSON");
  match_cmd->add_option("--traj", traj_path, "trajectory CSV (skips PDR)");

  auto* eval_cmd = app.add_subcommand("eval", "score trajectories against the route");
  add_common(eval_cmd, false);
  eval_cmd->add_option("--route", route_path, "route JSON");
  eval_cmd->add_option("--traj", traj_path, "trajectory CSV");
  eval_cmd->add_option("--baseline", baseline_path, "baseline trajectory CSV");

  auto* all_cmd = app.add_subcommand("run-all", "simulate, dead-reckon, match, evaluate");
  add_common(all_cmd, true);
  all_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::optional<std::uint64_t> seed_override =
        seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt;

    if (sim_cmd->parsed()) {
      if (config_path.empty()) throw pdrmm::ConfigError("no scenario given (--config)");
      return cmd_simulate(config_path, out_dir.empty() ? "." : out_dir, seed_override);
    }

    if (all_cmd->parsed()) {
      if (config_path.empty()) throw pdrmm::ConfigError("no scenario given (--config)");
      pdrmm::PdrConfig pdr;
      pdrmm::MatchParams match;
      if (!step_model.empty()) pdr.model = pdrmm::StepLengthModel::parse(step_model);
      if (turn_threshold_deg > 0.0)
        match.turn.threshold_rad = pdrmm::deg_to_rad(turn_threshold_deg);
      if (!scale_mode.empty()) match.scale = scale_mode == "on";
      return cmd_run_all(config_path, out_dir.empty() ? "." : out_dir, seed_override,
                         pdr, match, !step_model.empty());
    }

    RunOptions opt;
    if (!config_path.empty()) opt = load_run_config(config_path);
    if (!imu_path.empty()) opt.imu_path = imu_path;
    if (!route_path.empty()) opt.route_path = route_path;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (!step_model.empty()) opt.pdr.model = pdrmm::StepLengthModel::parse(step_model);
    if (turn_threshold_deg > 0.0)
      opt.match.turn.threshold_rad = pdrmm::deg_to_rad(turn_threshold_deg);
    if (!scale_mode.empty()) opt.match.scale = scale_mode == "on";

    if (pdr_cmd->parsed()) return cmd_pdr(opt);
    if (match_cmd->parsed()) return cmd_match(opt, traj_path);
    if (eval_cmd->parsed()) return cmd_eval(opt, traj_path, baseline_path);
    throw pdrmm::ConfigError("no subcommand given");
  } catch (const pdrmm::MatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const pdrmm::EmptyTrajectoryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pdrmm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pdrmm::EmptyInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pdrmm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pdrmm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "pdrmm/errors.hpp"
#include "pdrmm/geometry.hpp"
#include "pdrmm/imu.hpp"
#include "pdrmm/pdr.hpp"
#include "pdrmm/route.hpp"

namespace pdrmm {

inline constexpr double kGravityMps2 = 9.81;

// Parameters of a synthetic walk along a route: gait, IMU rate, sensor
// error terms, and the RNG seed making the run reproducible.
struct WalkScenario {
  RouteMap route;
  double cadence_hz = 2.0;
  double step_len_m = 0.7;
  double rate_hz = 100.0;
  double accel_peak = 3.0;             // gait amplitude, m/s^2
  double gyro_bias = 0.0;              // rad/s
  double gyro_noise_std = 0.0;         // rad/s
  double accel_noise_std = 0.0;        // m/s^2
  double initial_heading_bias = 0.0;   // rad, applied to the PDR origin pose
  double turn_transition_s = 1.0;      // heading smoothing across corners
  std::uint64_t seed = 0;
};

struct SimResult {
  SampleStream stream;
  std::vector<TrackPoint> truth;           // k = 0..N, poses on the route
  std::vector<std::size_t> turn_schedule;  // steps crossing interior corners
  double true_initial_heading = 0.0;
};

inline void validate_scenario(const WalkScenario& s) {
  validate_route(s.route);
  if (!(s.cadence_hz > 0.0)) throw ConfigError("cadence_hz must be positive");
  if (!(s.step_len_m > 0.0)) throw ConfigError("step_len_m must be positive");
  if (!(s.rate_hz > 0.0)) throw ConfigError("rate_hz must be positive");
  if (!(s.accel_peak > 0.0)) throw ConfigError("accel_peak must be positive");
  if (s.gyro_noise_std < 0.0 || s.accel_noise_std < 0.0)
    throw ConfigError("noise std values must be non-negative");
  if (s.turn_transition_s < 0.0)
    throw ConfigError("turn_transition_s must be non-negative");
}

namespace detail {

// Unwrapped direction of each traversal edge, so headings accumulate
// across turns instead of wrapping.
inline std::vector<double> unwrapped_edge_directions(const Polyline& path) {
  std::vector<double> dirs;
  dirs.reserve(path.vertices.size() - 1);
  double prev_raw = 0.0;
  for (std::size_t e = 0; e + 1 < path.vertices.size(); ++e) {
    const Vec2 d = path.vertices[e + 1] - path.vertices[e];
    const double raw = std::atan2(d.y, d.x);
    if (e == 0)
      dirs.push_back(raw);
    else
      dirs.push_back(dirs.back() + wrap_pi(raw - prev_raw));
    prev_raw = raw;
  }
  return dirs;
}

}  // namespace detail

// Generates the ground-truth walk and the matching noisy IMU stream.
//
// The accelerometer z channel carries gravity plus a cosine gait whose
// peaks land exactly on step timestamps. The z gyro carries one triangular
// rate pulse per corner, with knots on the sample grid so trapezoidal
// integration of the samples reproduces the heading profile exactly. A
// transition shorter than two sample intervals degenerates to a minimal
// pulse placed just after the corner-crossing step, which keeps heading at
// step timestamps exact for self-consistency checks; wider transitions are
// centered on the corner like a real walker easing through it.
inline SimResult simulate(const WalkScenario& scenario) {
  validate_scenario(scenario);
  const Polyline path = traversal(scenario.route);
  const std::size_t edge_count = path.vertices.size() - 1;

  std::vector<double> cum(path.vertices.size(), 0.0);
  for (std::size_t i = 1; i < path.vertices.size(); ++i)
    cum[i] = cum[i - 1] + distance(path.vertices[i - 1], path.vertices[i]);
  const double total_len = cum.back();

  const double l = scenario.step_len_m;
  const std::size_t n_steps =
      static_cast<std::size_t>(std::floor(total_len / l + 1e-9));
  if (n_steps < 1)
    throw ConfigError("route is shorter than one step");

  const auto edge_dir = detail::unwrapped_edge_directions(path);
  const double speed = l * scenario.cadence_hz;

  // Edge containing arc position s; corners belong to the incoming edge,
  // with a tolerance so step positions that land on a corner up to fp
  // error stay on it.
  auto edge_at = [&](double s) {
    std::size_t e = 0;
    while (e + 1 < edge_count && s > cum[e + 1] + 1e-9) ++e;
    return e;
  };

  SimResult result;
  result.true_initial_heading = edge_dir[0];
  result.truth.reserve(n_steps + 1);
  result.truth.push_back({0, path.vertices[0].x, path.vertices[0].y, edge_dir[0]});
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double s = std::min(static_cast<double>(k) * l, total_len);
    const std::size_t e = edge_at(s);
    const double seg_len = cum[e + 1] - cum[e];
    const double frac = (s - cum[e]) / seg_len;
    const Vec2 p = path.vertices[e] + frac * (path.vertices[e + 1] - path.vertices[e]);
    result.truth.push_back({k, p.x, p.y, edge_dir[e]});
  }

  // Interior traversal vertices are the corners the walker turns at.
  for (std::size_t j = 1; j < edge_count; ++j) {
    const auto k = static_cast<std::size_t>(std::ceil(cum[j] / l - 1e-9));
    result.turn_schedule.push_back(k);
  }

  // Sample grid. The tail past the last step keeps its accel peak an
  // interior maximum without admitting an extra gait cycle.
  const double rate = scenario.rate_hz;
  const double h = 1.0 / rate;
  const double t_last_step = static_cast<double>(n_steps) / scenario.cadence_hz;
  const double tail =
      std::min(0.45 / scenario.cadence_hz, std::max(0.3 / scenario.cadence_hz, 0.16));
  const auto n_samples =
      static_cast<std::size_t>(std::floor((t_last_step + tail) * rate + 1e-9)) + 1;

  // Per-sample true angular rate: triangular pulses at corner crossings.
  std::vector<double> omega(n_samples, 0.0);
  const auto half_width_samples = static_cast<long>(
      std::lround(0.5 * scenario.turn_transition_s * rate));
  for (std::size_t j = 1; j < edge_count; ++j) {
    const double turn_angle = edge_dir[j] - edge_dir[j - 1];
    const long center = std::lround(cum[j] / speed * rate);
    long first, peak;
    if (half_width_samples < 1) {
      first = center;          // minimal pulse just after the corner step
      peak = center + 1;
    } else {
      first = center - half_width_samples;
      peak = center;
    }
    const long last = 2 * peak - first;
    const double w = static_cast<double>(peak - first) * h;
    const double peak_rate = turn_angle / w;
    for (long i = std::max(first, 0L);
         i <= last && i < static_cast<long>(n_samples); ++i) {
      const double rise = i <= peak
                              ? static_cast<double>(i - first) / (peak - first)
                              : static_cast<double>(last - i) / (last - peak);
      omega[i] += peak_rate * rise;
    }
  }

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> accel_noise(0.0, std::max(scenario.accel_noise_std, 1e-300));
  std::normal_distribution<double> gyro_noise(0.0, std::max(scenario.gyro_noise_std, 1e-300));
  const bool accel_noisy = scenario.accel_noise_std > 0.0;
  const bool gyro_noisy = scenario.gyro_noise_std > 0.0;

  result.stream.rate_hz = rate;
  result.stream.samples.reserve(n_samples);
  const double two_pi_f = 2.0 * kPi * scenario.cadence_hz;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) * h;
    ImuSample s;
    s.t = t;
    const double gait = scenario.accel_peak * std::cos(two_pi_f * t);
    s.accel = {accel_noisy ? accel_noise(rng) : 0.0,
               accel_noisy ? accel_noise(rng) : 0.0,
               kGravityMps2 + gait + (accel_noisy ? accel_noise(rng) : 0.0)};
    s.gyro = {gyro_noisy ? gyro_noise(rng) : 0.0,
              gyro_noisy ? gyro_noise(rng) : 0.0,
              omega[i] + scenario.gyro_bias + (gyro_noisy ? gyro_noise(rng) : 0.0)};
    result.stream.samples.push_back(s);
  }
  return result;
}

inline WalkScenario scenario_from_json(const nlohmann::json& j) {
  WalkScenario s;
  if (!j.contains("route"))
    throw ConfigError("scenario missing field \"route\"");
  const auto& r = j.at("route");
  if (!r.contains("corners"))
    throw ConfigError("scenario missing field \"route.corners\"");
  for (const auto& c : r.at("corners")) {
    if (!c.is_array() || c.size() != 2)
      throw ConfigError("route corner must be a [x, y] pair");
    s.route.corners.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
  }
  s.route.closed = r.value("closed", false);
  s.cadence_hz = j.value("cadence_hz", s.cadence_hz);
  s.step_len_m = j.value("step_len_m", s.step_len_m);
  s.rate_hz = j.value("rate_hz", s.rate_hz);
  s.accel_peak = j.value("accel_peak", s.accel_peak);
  s.gyro_bias = j.value("gyro_bias", s.gyro_bias);
  s.gyro_noise_std = j.value("gyro_noise_std", s.gyro_noise_std);
  s.accel_noise_std = j.value("accel_noise_std", s.accel_noise_std);
  s.initial_heading_bias = j.value("initial_heading_bias", s.initial_heading_bias);
  s.turn_transition_s = j.value("turn_transition_s", s.turn_transition_s);
  s.seed = j.value("seed", s.seed);
  validate_scenario(s);
  return s;
}

inline nlohmann::json scenario_to_json(const WalkScenario& s) {
  nlohmann::json j;
  j["route"]["corners"] = nlohmann::json::array();
  for (const auto& c : s.route.corners) j["route"]["corners"].push_back({c.x, c.y});
  j["route"]["closed"] = s.route.closed;
  j["cadence_hz"] = s.cadence_hz;
  j["step_len_m"] = s.step_len_m;
  j["rate_hz"] = s.rate_hz;
  j["accel_peak"] = s.accel_peak;
  j["gyro_bias"] = s.gyro_bias;
  j["gyro_noise_std"] = s.gyro_noise_std;
  j["accel_noise_std"] = s.accel_noise_std;
  j["initial_heading_bias"] = s.initial_heading_bias;
  j["turn_transition_s"] = s.turn_transition_s;
  j["seed"] = s.seed;
  return j;
}

}  // namespace pdrmm

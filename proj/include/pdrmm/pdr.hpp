#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdrmm/errors.hpp"
#include "pdrmm/geometry.hpp"
#include "pdrmm/imu.hpp"

namespace pdrmm {

// A detected footfall: the sample it peaked at, its time, and the peak value.
struct StepEvent {
  std::size_t sample_index = 0;
  double t = 0.0;
  double peak_value = 0.0;
};

struct StepDetectParams {
  double min_peak = 10.8;      // m/s^2, above the gravity baseline
  double refractory_s = 0.3;   // minimum spacing between accepted steps
};

// Every local maximum >= min_peak, thinned so no accepted event lies within
// the refractory time of the previous one.
inline std::vector<StepEvent> detect_steps(std::span<const double> signal,
                                           std::span<const double> t,
                                           const StepDetectParams& params) {
  if (signal.size() != t.size())
    throw ConfigError("signal and time arrays differ in length");
  if (params.refractory_s <= 0.0)
    throw ConfigError("refractory time must be positive");
  std::vector<StepEvent> events;
  for (std::size_t i = 1; i + 1 < signal.size(); ++i) {
    if (signal[i] < params.min_peak) continue;
    if (!(signal[i] > signal[i - 1] && signal[i] >= signal[i + 1])) continue;
    if (!events.empty() && t[i] - events.back().t < params.refractory_s) continue;
    events.push_back({i, t[i], signal[i]});
  }
  return events;
}

enum class GyroAxis { X = 0, Y = 1, Z = 2 };

// Trapezoidal integral of one angular-rate channel between sample indices.
inline double integrate_rate(const SampleStream& stream, GyroAxis axis,
                             std::size_t i0, std::size_t i1) {
  if (i1 >= stream.size() || i0 > i1)
    throw ConfigError("integration range outside stream");
  const int a = static_cast<int>(axis);
  double sum = 0.0;
  for (std::size_t i = i0 + 1; i <= i1; ++i) {
    const auto& p = stream.samples[i - 1];
    const auto& q = stream.samples[i];
    sum += 0.5 * (q.t - p.t) * (p.gyro[a] + q.gyro[a]);
  }
  return sum;
}

// Heading per detected step, radians CCW from the map x-axis, unwrapped so
// turn deltas stay meaningful.
struct HeadingTrack {
  double phi0 = 0.0;
  std::vector<double> phi;
};

inline HeadingTrack estimate_heading(const SampleStream& stream,
                                     std::span<const StepEvent> steps,
                                     double phi0,
                                     GyroAxis axis = GyroAxis::Z) {
  if (steps.empty()) throw EmptyTrajectoryError("no steps to estimate headings for");
  const int a = static_cast<int>(axis);
  // Cumulative trapezoid over the whole stream, then sampled at step indices.
  std::vector<double> cum(stream.size(), 0.0);
  for (std::size_t i = 1; i < stream.size(); ++i) {
    const auto& p = stream.samples[i - 1];
    const auto& q = stream.samples[i];
    cum[i] = cum[i - 1] + 0.5 * (q.t - p.t) * (p.gyro[a] + q.gyro[a]);
  }
  HeadingTrack track;
  track.phi0 = phi0;
  track.phi.reserve(steps.size());
  for (const auto& s : steps) {
    if (s.sample_index >= stream.size())
      throw ConfigError("step timestamp outside stream time range");
    track.phi.push_back(phi0 + cum[s.sample_index]);
  }
  return track;
}

// Step-length model: a constant, or Weinberg's fourth-root-of-accel-range
// estimate over a short vertical-acceleration window preceding each step.
struct StepLengthModel {
  enum class Kind { Fixed, Weinberg };
  Kind kind = Kind::Fixed;
  double fixed_length_m = 0.7;
  double gain = 0.5;      // Weinberg K
  double window_s = 0.5;  // Weinberg max/min window before the step

  static StepLengthModel fixed(double length_m) {
    if (!(length_m > 0.0))
      throw ConfigError("fixed step length must be positive");
    StepLengthModel m;
    m.kind = Kind::Fixed;
    m.fixed_length_m = length_m;
    return m;
  }

  static StepLengthModel weinberg(double gain, double window_s = 0.5) {
    if (!(gain > 0.0)) throw ConfigError("weinberg gain must be positive");
    if (!(window_s > 0.0)) throw ConfigError("weinberg window must be positive");
    StepLengthModel m;
    m.kind = Kind::Weinberg;
    m.gain = gain;
    m.window_s = window_s;
    return m;
  }

  // Accepts "fixed:<m>" or "weinberg:<K>[:<window_s>]".
  static StepLengthModel parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    std::string rest(colon == std::string_view::npos ? ""
                                                     : text.substr(colon + 1));
    try {
      if (name == "fixed") {
        if (rest.empty()) return fixed(0.7);
        return fixed(std::stod(rest));
      }
      if (name == "weinberg") {
        const auto c2 = rest.find(':');
        if (rest.empty()) return weinberg(0.5);
        if (c2 == std::string::npos) return weinberg(std::stod(rest));
        return weinberg(std::stod(rest.substr(0, c2)),
                        std::stod(rest.substr(c2 + 1)));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad step-length parameter in '" + std::string(text) + "'");
    }
    throw ConfigError("unknown step-length model '" + name +
                      "' (expected fixed or weinberg)");
  }
};

inline double step_length(const StepLengthModel& model, const StepEvent& step,
                          const SampleStream& stream) {
  switch (model.kind) {
    case StepLengthModel::Kind::Fixed:
      if (!(model.fixed_length_m > 0.0))
        throw ConfigError("fixed step length must be positive");
      return model.fixed_length_m;
    case StepLengthModel::Kind::Weinberg: {
      const double t_lo = step.t - model.window_s;
      double a_max = -std::numeric_limits<double>::infinity();
      double a_min = std::numeric_limits<double>::infinity();
      for (const auto& s : stream.samples) {
        if (s.t < t_lo) continue;
        if (s.t > step.t) break;
        a_max = std::max(a_max, s.accel[2]);
        a_min = std::min(a_min, s.accel[2]);
      }
      if (a_max < a_min)
        throw ConfigError("weinberg window contains no samples");
      return model.gain * std::pow(a_max - a_min, 0.25);
    }
  }
  throw ConfigError("unknown step-length model id");
}

// Per-step 2-D pose. k counts steps from the known origin (k = 0).
struct TrackPoint {
  std::size_t k = 0;
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
};

// One step of the dead-reckoning position update:
//   (x, y) += l * (cos phi, sin phi)
inline TrackPoint propagate(const TrackPoint& prev, double l, double phi) {
  if (!(l >= 0.0)) throw ConfigError("step length must be non-negative");
  if (!std::isfinite(phi)) throw ConfigError("heading must be finite");
  return {prev.k + 1, prev.x + l * std::cos(phi), prev.y + l * std::sin(phi),
          phi};
}

struct Trajectory {
  TrackPoint origin;
  std::vector<TrackPoint> points;  // k = 1..N
  StepLengthModel step_length_model;

  std::size_t step_count() const { return points.size(); }
};

struct PdrConfig {
  double x0 = 0.0;
  double y0 = 0.0;
  double phi0 = 0.0;
  StepDetectParams detect;
  int smooth_window = 0;  // 0 = quarter-second default for the stream rate
  bool detrend = false;
  double detrend_window_s = 2.0;
  StepLengthModel model;
  GyroAxis yaw_axis = GyroAxis::Z;
};

// Full pipeline: peak detection on the smoothed accelerometer magnitude,
// gyro heading integration, step-length assignment, position propagation.
inline Trajectory run_pdr(const SampleStream& stream, const PdrConfig& config) {
  auto signal = accel_magnitude(stream);
  const int window = config.smooth_window > 0
                         ? config.smooth_window
                         : default_smooth_window(stream.rate_hz);
  signal = smooth(signal, window);
  if (config.detrend) {
    int dw = static_cast<int>(std::lround(config.detrend_window_s * stream.rate_hz));
    if (dw < 1) dw = 1;
    if (dw % 2 == 0) ++dw;
    signal = detrend(signal, dw);
  }
  const auto t = stream.times();
  const auto steps = detect_steps(signal, t, config.detect);
  if (steps.empty())
    throw EmptyTrajectoryError("no steps detected in the input stream");

  const auto headings =
      estimate_heading(stream, steps, config.phi0, config.yaw_axis);

  Trajectory traj;
  traj.origin = {0, config.x0, config.y0, config.phi0};
  traj.step_length_model = config.model;
  traj.points.reserve(steps.size());
  TrackPoint prev = traj.origin;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double l = step_length(config.model, steps[i], stream);
    prev = propagate(prev, l, headings.phi[i]);
    traj.points.push_back(prev);
  }
  return traj;
}

}  // namespace pdrmm

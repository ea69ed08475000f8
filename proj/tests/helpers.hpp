#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pdrmm/pdrmm.hpp"

namespace testutil {

// Closed rectangle with edges that are whole multiples of a 0.7 m step:
// 57 + 32 + 57 + 32 = 178 steps, perimeter 124.6 m. Corners land exactly
// on step positions, which makes zero-noise PDR runs checkable to fp
// accuracy.
inline pdrmm::RouteMap aligned_rect_route() {
  return {{{0.0, 0.0}, {39.9, 0.0}, {39.9, 22.4}, {0.0, 22.4}}, true};
}

// Paper-scale rectangle with an exactly 125 m perimeter.
inline pdrmm::RouteMap perimeter125_route() {
  return {{{0.0, 0.0}, {40.0, 0.0}, {40.0, 22.5}, {0.0, 22.5}}, true};
}

inline pdrmm::RouteMap straight_route(double length_m) {
  return {{{0.0, 0.0}, {length_m, 0.0}}, false};
}

// Open L with step-aligned edges (30 + 20 steps of 0.7 m).
inline pdrmm::RouteMap l_route() {
  return {{{0.0, 0.0}, {21.0, 0.0}, {21.0, 14.0}}, false};
}

// Noise-free, bias-free walk with instantaneous turns; PDR on this stream
// reproduces the truth to fp accuracy.
inline pdrmm::WalkScenario exact_scenario(pdrmm::RouteMap route) {
  pdrmm::WalkScenario s;
  s.route = std::move(route);
  s.turn_transition_s = 0.0;
  return s;
}

inline pdrmm::PdrConfig pdr_config_for(const pdrmm::SimResult& sim,
                                       const pdrmm::WalkScenario& scenario) {
  pdrmm::PdrConfig cfg;
  cfg.x0 = scenario.route.corners.front().x;
  cfg.y0 = scenario.route.corners.front().y;
  cfg.phi0 = sim.true_initial_heading + scenario.initial_heading_bias;
  cfg.model = pdrmm::StepLengthModel::fixed(scenario.step_len_m);
  return cfg;
}

inline std::vector<pdrmm::TrackPoint> with_origin(const pdrmm::Trajectory& traj) {
  std::vector<pdrmm::TrackPoint> all;
  all.push_back(traj.origin);
  all.insert(all.end(), traj.points.begin(), traj.points.end());
  return all;
}

inline std::vector<pdrmm::TrackPoint> with_origin(const pdrmm::MatchedTrajectory& traj) {
  std::vector<pdrmm::TrackPoint> all;
  all.push_back(traj.origin);
  all.insert(all.end(), traj.points.begin(), traj.points.end());
  return all;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testutil

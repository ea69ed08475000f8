#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pdrmm/errors.hpp"
#include "pdrmm/geometry.hpp"
#include "pdrmm/pdr.hpp"
#include "pdrmm/route.hpp"

namespace pdrmm {

// A step whose heading change over the detection window crossed the turn
// threshold. step_index indexes Trajectory.points.
struct TurnPoint {
  std::size_t step_index = 0;
  double delta_phi = 0.0;
};

struct TurnDetectParams {
  double threshold_rad = deg_to_rad(45.0);
  std::size_t window = 3;  // steps
};

// Emits a turn wherever |phi[k] - phi[k-window]| crosses the threshold.
// Runs of detections within `window` steps of each other collapse to one
// TurnPoint. The run is located by the centroid of its detection indices
// weighted by threshold excess (detections barely at the threshold carry
// no weight, so the result does not depend on which side of the threshold
// fp noise puts them), then recentred by half a window so the emitted
// step sits where the heading change happened rather than at the trailing
// edge of the detection window.
inline std::vector<TurnPoint> detect_turns(const Trajectory& traj,
                                           const TurnDetectParams& params) {
  if (params.window < 1) throw ConfigError("turn window must be >= 1");
  if (!(params.threshold_rad > 0.0))
    throw ConfigError("turn threshold must be positive");
  const auto& pts = traj.points;
  const std::size_t w = params.window;
  std::vector<TurnPoint> turns;
  bool in_run = false;
  double best_delta = 0.0;
  double weight_sum = 0.0, offset_sum = 0.0;
  std::size_t run_first = 0, last_hit = 0;
  auto flush = [&] {
    if (in_run) {
      const double offset = weight_sum > 0.0
                                ? offset_sum / weight_sum
                                : 0.5 * static_cast<double>(last_hit - run_first);
      const auto center = run_first + static_cast<std::size_t>(std::floor(offset));
      turns.push_back({center - w / 2, best_delta});
    }
    in_run = false;
    best_delta = weight_sum = offset_sum = 0.0;
  };
  for (std::size_t k = w; k < pts.size(); ++k) {
    const double delta = pts[k].phi - pts[k - w].phi;
    if (std::abs(delta) < params.threshold_rad) continue;
    if (in_run && k - last_hit > w) flush();
    if (!in_run) run_first = k;
    if (std::abs(delta) > std::abs(best_delta)) best_delta = delta;
    const double weight = std::abs(delta) - params.threshold_rad;
    weight_sum += weight;
    offset_sum += weight * static_cast<double>(k - run_first);
    in_run = true;
    last_hit = k;
  }
  flush();
  return turns;
}

// Ordered 1:1 pairing of detected turns with the route's interior corners.
struct CornerAssignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // step idx -> corner idx
  std::size_t start_corner = 0;   // anchors the trajectory origin
  Vec2 finish = {};               // target of the segment after the last turn
};

inline CornerAssignment associate_corners(std::span<const TurnPoint> turns,
                                          const RouteMap& route) {
  validate_route(route);
  const auto interior = interior_corner_indices(route);
  if (turns.size() != interior.size())
    throw MismatchError(turns.size(), interior.size());
  CornerAssignment assignment;
  assignment.pairs.reserve(turns.size());
  for (std::size_t i = 0; i < turns.size(); ++i)
    assignment.pairs.emplace_back(turns[i].step_index, interior[i]);
  assignment.start_corner = 0;
  assignment.finish = finish_anchor(route);
  return assignment;
}

// Signed angle from the line (prev_anchor -> corner_end) to the line
// (prev_anchor -> pdr_end), in (-pi, pi]. transform_segment with this angle
// maps the direction of pdr_end onto the direction of corner_end.
inline double segment_theta(Vec2 prev_anchor, Vec2 pdr_end, Vec2 corner_end) {
  const Vec2 u = pdr_end - prev_anchor;
  const Vec2 v = corner_end - prev_anchor;
  if (norm(u) <= 1e-12 || norm(v) <= 1e-12)
    throw DegenerateGeometryError("coincident anchor points leave the rotation undefined");
  return wrap_pi(std::atan2(u.y, u.x) - std::atan2(v.y, v.x));
}

// Shift-and-rotate correction about a matched turn point:
//   X' = (X - Xtp) cos t + (Y - Ytp) sin t + Xtp
//   Y' = (Y - Ytp) cos t - (X - Xtp) sin t + Ytp
// i.e. a clockwise rotation by theta about the pivot. Headings carry
// phi' = phi - theta.
inline std::vector<TrackPoint> transform_segment(std::span<const TrackPoint> points,
                                                 Vec2 pivot, double theta) {
  if (theta == 0.0) return {points.begin(), points.end()};
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<TrackPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double dx = p.x - pivot.x;
    const double dy = p.y - pivot.y;
    out.push_back({p.k, dx * c + dy * s + pivot.x, dy * c - dx * s + pivot.y,
                   p.phi - theta});
  }
  return out;
}

// Transform parameters applied to one inter-turn segment of the trajectory.
struct SegmentTransform {
  std::size_t first = 0;  // points index range, inclusive
  std::size_t last = 0;
  Vec2 pivot = {};
  double theta = 0.0;
  double scale = 1.0;
  Vec2 corner = {};       // where the terminal point was snapped
};

struct MatchedTrajectory {
  TrackPoint origin;
  std::vector<TrackPoint> points;
  std::vector<SegmentTransform> segments;
};

struct MatchParams {
  TurnDetectParams turn;
  bool scale = false;  // per-segment radial scaling so endpoints land exactly
};

// Walks the trajectory segment by segment: each detected turn point snaps
// to its assigned corner, intermediate points are shifted to the previous
// matched anchor and rotated so the segment end lines up with the corner,
// optionally rescaled radially so it lands on it exactly. The tail after
// the last turn is matched against the route finish anchor.
inline MatchedTrajectory match_trajectory(const Trajectory& traj,
                                          const RouteMap& route,
                                          const MatchParams& params) {
  const auto turns = detect_turns(traj, params.turn);
  const auto assignment = associate_corners(turns, route);
  const auto& pts = traj.points;
  if (pts.empty()) throw EmptyTrajectoryError("trajectory has no points to match");
  if (!turns.empty() && turns.back().step_index + 1 >= pts.size())
    throw DegenerateGeometryError("last turn leaves no trailing segment to anchor");

  // Boundaries: every matched turn, then the trajectory end against the
  // route finish anchor.
  std::vector<std::pair<std::size_t, Vec2>> boundaries;
  boundaries.reserve(assignment.pairs.size() + 1);
  for (const auto& [step_idx, corner_idx] : assignment.pairs)
    boundaries.emplace_back(step_idx, route.corners[corner_idx]);
  boundaries.emplace_back(pts.size() - 1, assignment.finish);

  MatchedTrajectory out;
  out.points.resize(pts.size());

  Vec2 anchor_matched = route.corners[assignment.start_corner];
  Vec2 anchor_pdr = {traj.origin.x, traj.origin.y};
  std::size_t seg_begin = 0;

  double theta0 = 0.0;
  for (const auto& [terminal, target] : boundaries) {
    const Vec2 shift = anchor_matched - anchor_pdr;
    const Vec2 end_shifted = Vec2{pts[terminal].x, pts[terminal].y} + shift;
    const double theta = segment_theta(anchor_matched, end_shifted, target);
    if (seg_begin == 0) theta0 = theta;

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double seg_len = norm(end_shifted - anchor_matched);
    const double scale =
        params.scale ? norm(target - anchor_matched) / seg_len : 1.0;

    for (std::size_t i = seg_begin; i <= terminal; ++i) {
      const double dx = pts[i].x + shift.x - anchor_matched.x;
      const double dy = pts[i].y + shift.y - anchor_matched.y;
      TrackPoint q{pts[i].k, dx * c + dy * s, dy * c - dx * s,
                   pts[i].phi - theta};
      q.x = anchor_matched.x + scale * q.x;
      q.y = anchor_matched.y + scale * q.y;
      out.points[i] = q;
    }
    // Exact assignment of the turn point to its corner.
    out.points[terminal].x = target.x;
    out.points[terminal].y = target.y;

    out.segments.push_back({seg_begin, terminal, anchor_matched, theta, scale,
                            target});
    anchor_matched = target;
    anchor_pdr = {pts[terminal].x, pts[terminal].y};
    seg_begin = terminal + 1;
  }

  out.origin = {0, route.corners[assignment.start_corner].x,
                route.corners[assignment.start_corner].y,
                traj.origin.phi - theta0};
  return out;
}

}  // namespace pdrmm

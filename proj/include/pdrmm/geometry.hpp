#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "pdrmm/errors.hpp"

namespace pdrmm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle into (-pi, pi].
inline double wrap_pi(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Shared geometry carrier for routes and trajectories.
struct Polyline {
  std::vector<Vec2> vertices;
};

inline void validate_polyline(const Polyline& p) {
  if (p.vertices.size() < 2)
    throw ConfigError("polyline requires at least 2 vertices");
  for (const auto& v : p.vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw ConfigError("polyline has non-finite coordinates");
}

inline double path_length(const Polyline& p) {
  validate_polyline(p);
  double total = 0.0;
  for (std::size_t i = 1; i < p.vertices.size(); ++i)
    total += distance(p.vertices[i - 1], p.vertices[i]);
  return total;
}

// Distance from q to the segment [a, b], interior projections included.
inline double point_to_segment_distance(Vec2 q, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len_sq = dot(ab, ab);
  if (len_sq == 0.0) return distance(q, a);
  double t = dot(q - a, ab) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  return distance(q, a + t * ab);
}

inline double point_to_path_distance(Vec2 q, const Polyline& p) {
  validate_polyline(p);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < p.vertices.size(); ++i)
    best = std::min(best,
                    point_to_segment_distance(q, p.vertices[i - 1], p.vertices[i]));
  return best;
}

}  // namespace pdrmm

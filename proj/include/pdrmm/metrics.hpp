#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "pdrmm/errors.hpp"
#include "pdrmm/geometry.hpp"
#include "pdrmm/pdr.hpp"
#include "pdrmm/route.hpp"

namespace pdrmm {

// Position-error summary of a trajectory against the ground-truth path.
struct ErrorStats {
  std::vector<double> per_point;                 // meters, one per track point
  double mean = 0.0;
  double std_dev = 0.0;                          // population
  double max = 0.0;
  std::vector<std::pair<double, double>> cdf;    // (error, cumulative fraction)
  std::optional<double> loop_gap;                // start-to-finish distance
};

// Per-point distance to the route polyline, plus mean/std/max, the exact
// empirical CDF, and the loop-closure gap for closed routes.
inline ErrorStats evaluate(std::span<const TrackPoint> points,
                           const RouteMap& route) {
  if (points.empty()) throw EmptyInputError("trajectory has no points to evaluate");
  validate_route(route);
  const Polyline path = traversal(route);

  ErrorStats stats;
  stats.per_point.reserve(points.size());
  for (const auto& p : points)
    stats.per_point.push_back(point_to_path_distance({p.x, p.y}, path));

  const double n = static_cast<double>(stats.per_point.size());
  double sum = 0.0;
  for (double e : stats.per_point) sum += e;
  stats.mean = sum / n;
  double sq = 0.0;
  for (double e : stats.per_point) sq += (e - stats.mean) * (e - stats.mean);
  stats.std_dev = std::sqrt(sq / n);
  stats.max = *std::max_element(stats.per_point.begin(), stats.per_point.end());

  auto sorted = stats.per_point;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t count = sorted.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (i + 1 < count && sorted[i + 1] == sorted[i]) continue;  // merge ties
    stats.cdf.emplace_back(sorted[i],
                           static_cast<double>(i + 1) / static_cast<double>(count));
  }

  if (route.closed) {
    const auto& a = points.front();
    const auto& b = points.back();
    stats.loop_gap = distance({a.x, a.y}, {b.x, b.y});
  }
  return stats;
}

// Fractional error reduction of `matched` relative to `pdr`.
inline double reduction_ratio(const ErrorStats& pdr, const ErrorStats& matched) {
  if (pdr.mean == 0.0)
    throw ConfigError("reduction ratio undefined: baseline mean error is zero");
  return 1.0 - matched.mean / pdr.mean;
}

inline void export_cdf(const ErrorStats& stats, std::ostream& out) {
  out << "error_m,cum_fraction\n";
  char buf[128];
  for (const auto& [err, frac] : stats.cdf) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", err, frac);
    out << buf;
  }
  if (!out) throw IoError("failed to write CDF data");
}

}  // namespace pdrmm

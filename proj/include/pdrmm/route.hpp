#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "pdrmm/errors.hpp"
#include "pdrmm/geometry.hpp"

namespace pdrmm {

// Ordered corner points of the walked indoor path. `corners` holds each
// corner once, start point first; `closed` marks routes whose walk returns
// to the start, so the finish anchor is corners[0] again.
struct RouteMap {
  std::vector<Vec2> corners;
  bool closed = false;
};

inline void validate_route(const RouteMap& route) {
  if (route.corners.size() < 2)
    throw ConfigError("route requires at least 2 corners, got " +
                      std::to_string(route.corners.size()));
  for (const auto& c : route.corners)
    if (!std::isfinite(c.x) || !std::isfinite(c.y))
      throw ConfigError("route has non-finite corner coordinates");
  for (std::size_t i = 1; i < route.corners.size(); ++i)
    if (distance(route.corners[i - 1], route.corners[i]) <= 1e-9)
      throw ConfigError("route corners " + std::to_string(i - 1) + " and " +
                        std::to_string(i) + " coincide");
  if (route.closed &&
      distance(route.corners.front(), route.corners.back()) <= 1e-9)
    throw ConfigError("closed route must not repeat the start corner");
}

// The walked path as a polyline, with the closing edge appended for
// closed routes.
inline Polyline traversal(const RouteMap& route) {
  Polyline p{route.corners};
  if (route.closed) p.vertices.push_back(route.corners.front());
  return p;
}

inline double route_length(const RouteMap& route) {
  return path_length(traversal(route));
}

// Corners where turns occur, excluding the start and finish anchors.
inline std::vector<std::size_t> interior_corner_indices(const RouteMap& route) {
  std::vector<std::size_t> idx;
  const std::size_t n = route.corners.size();
  const std::size_t last = route.closed ? n : n - 1;
  for (std::size_t i = 1; i < last; ++i) idx.push_back(i);
  return idx;
}

inline Vec2 finish_anchor(const RouteMap& route) {
  return route.closed ? route.corners.front() : route.corners.back();
}

inline RouteMap load_route(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("route file is not valid JSON: ") + e.what());
  }
  if (!j.contains("corners"))
    throw ConfigError("route file missing field \"corners\"");
  RouteMap route;
  for (const auto& c : j.at("corners")) {
    if (!c.is_array() || c.size() != 2)
      throw ConfigError("route corner must be a [x, y] pair");
    route.corners.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
  }
  route.closed = j.value("closed", false);
  validate_route(route);
  return route;
}

inline void save_route(const RouteMap& route, std::ostream& out) {
  nlohmann::json j;
  j["corners"] = nlohmann::json::array();
  for (const auto& c : route.corners) j["corners"].push_back({c.x, c.y});
  j["closed"] = route.closed;
  out << j.dump(2) << '\n';
}

}  // namespace pdrmm

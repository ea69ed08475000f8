#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pdrmm/errors.hpp"
#include "pdrmm/imu.hpp"
#include "pdrmm/pdr.hpp"

namespace pdrmm {

inline constexpr const char* kTrajCsvHeader = "k,x,y,phi";

// Writes the full track, origin row (k = 0) first.
inline void write_trajectory_csv(std::span<const TrackPoint> points,
                                 std::ostream& out) {
  out << kTrajCsvHeader << '\n';
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", p.k, p.x, p.y,
                  p.phi);
    out << buf;
  }
  if (!out) throw IoError("failed to write trajectory data");
}

inline std::vector<TrackPoint> read_trajectory_csv(std::istream& in) {
  std::vector<TrackPoint> points;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = detail::split_csv(line);
    if (fields.size() != 4)
      throw ParseError("expected 4 columns, got " + std::to_string(fields.size()),
                       line_no);
    TrackPoint p;
    p.k = static_cast<std::size_t>(detail::parse_field(fields[0], line_no));
    p.x = detail::parse_field(fields[1], line_no);
    p.y = detail::parse_field(fields[2], line_no);
    p.phi = detail::parse_field(fields[3], line_no);
    points.push_back(p);
  }
  if (points.empty()) throw EmptyInputError("trajectory file contains no points");
  return points;
}

}  // namespace pdrmm

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdrmm {

// Base class for every failure the library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input content. `line` is 1-based when known, 0 otherwise.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, std::size_t line_no = 0)
      : Error(line_no ? msg + " (line " + std::to_string(line_no) + ")" : msg),
        line(line_no) {}
  std::size_t line;
};

// Timestamps out of order or duplicated.
struct OrderingError : ParseError {
  using ParseError::ParseError;
};

// Input that parses but contains no usable data.
struct EmptyInputError : Error {
  using Error::Error;
};

// Bad configuration, scenario, route, or operation parameters.
struct ConfigError : Error {
  using Error::Error;
};

// A pipeline stage produced nothing to work with (e.g. zero detected steps).
struct EmptyTrajectoryError : Error {
  using Error::Error;
};

// Base for map-matching failures.
struct MatchError : Error {
  using Error::Error;
};

// Turn count does not equal the interior corner count of the route.
struct MismatchError : MatchError {
  MismatchError(std::size_t turns_found, std::size_t corners_expected)
      : MatchError(std::to_string(turns_found) + " turns vs " +
                   std::to_string(corners_expected) + " corners"),
        turns(turns_found),
        corners(corners_expected) {}
  std::size_t turns;
  std::size_t corners;
};

// Coincident anchor points where a direction is required.
struct DegenerateGeometryError : MatchError {
  using MatchError::MatchError;
};

// Filesystem-level read/write failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace pdrmm

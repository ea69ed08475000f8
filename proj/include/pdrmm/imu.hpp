#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pdrmm/errors.hpp"

namespace pdrmm {

// One timestamped accelerometer + gyroscope reading, device frame, SI units.
struct ImuSample {
  double t = 0.0;                        // seconds, relative to log start
  std::array<double, 3> accel{};         // m/s^2
  std::array<double, 3> gyro{};          // rad/s
};

struct SampleStream {
  std::vector<ImuSample> samples;
  double rate_hz = 0.0;                  // nominal sampling rate

  std::size_t size() const { return samples.size(); }

  std::vector<double> times() const {
    std::vector<double> t(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) t[i] = samples[i].t;
    return t;
  }
};

// Column layout of an IMU log CSV. The standard layout is the header
// `t,ax,ay,az,gx,gy,gz`; foreign layouts remap columns by index and may
// carry extra columns past the highest mapped one.
struct CsvLayout {
  int t = 0, ax = 1, ay = 2, az = 3, gx = 4, gy = 5, gz = 6;
  bool has_header = true;
  bool strict_columns = true;   // row must have exactly max_index+1 columns

  static CsvLayout standard() { return {}; }

  static CsvLayout mapped(int t, int ax, int ay, int az, int gx, int gy,
                          int gz, bool has_header) {
    return {t, ax, ay, az, gx, gy, gz, has_header, false};
  }

  int max_index() const {
    int m = t;
    for (int i : {ax, ay, az, gx, gy, gz}) m = std::max(m, i);
    return m;
  }
};

inline constexpr const char* kImuCsvHeader = "t,ax,ay,az,gx,gy,gz";

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

inline double parse_field(const std::string& s, std::size_t line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("non-numeric field '" + s + "'", line_no);
  return v;
}

}  // namespace detail

inline SampleStream parse_imu_log(std::istream& in,
                                  const CsvLayout& layout = CsvLayout::standard()) {
  SampleStream stream;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = layout.has_header;
  const int need = layout.max_index() + 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (header_pending) {
      header_pending = false;
      if (layout.strict_columns) {
        std::string got = line;
        if (!got.empty() && got.back() == '\r') got.pop_back();
        if (got != kImuCsvHeader)
          throw ParseError("expected header '" + std::string(kImuCsvHeader) +
                               "', got '" + got + "'",
                           line_no);
      }
      continue;
    }
    const auto fields = detail::split_csv(line);
    if (static_cast<int>(fields.size()) < need ||
        (layout.strict_columns && static_cast<int>(fields.size()) != need))
      throw ParseError("expected " + std::to_string(need) + " columns, got " +
                           std::to_string(fields.size()),
                       line_no);
    ImuSample s;
    s.t = detail::parse_field(fields[layout.t], line_no);
    s.accel = {detail::parse_field(fields[layout.ax], line_no),
               detail::parse_field(fields[layout.ay], line_no),
               detail::parse_field(fields[layout.az], line_no)};
    s.gyro = {detail::parse_field(fields[layout.gx], line_no),
              detail::parse_field(fields[layout.gy], line_no),
              detail::parse_field(fields[layout.gz], line_no)};
    if (!std::isfinite(s.t) || s.t < 0.0)
      throw ParseError("timestamp must be finite and non-negative", line_no);
    for (double v : s.accel)
      if (!std::isfinite(v)) throw ParseError("non-finite accel value", line_no);
    for (double v : s.gyro)
      if (!std::isfinite(v)) throw ParseError("non-finite gyro value", line_no);
    if (!stream.samples.empty()) {
      const double prev = stream.samples.back().t;
      if (s.t == prev)
        throw OrderingError("duplicate timestamp " + std::to_string(s.t), line_no);
      if (s.t < prev)
        throw OrderingError("timestamps not strictly increasing", line_no);
    }
    stream.samples.push_back(s);
  }

  if (stream.samples.empty()) throw EmptyInputError("IMU log contains no samples");
  const double span = stream.samples.back().t - stream.samples.front().t;
  stream.rate_hz = span > 0.0
                       ? static_cast<double>(stream.samples.size() - 1) / span
                       : 0.0;
  return stream;
}

inline void write_imu_log(const SampleStream& stream, std::ostream& out) {
  out << kImuCsvHeader << '\n';
  char buf[512];
  for (const auto& s : stream.samples) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  s.accel[0], s.accel[1], s.accel[2], s.gyro[0], s.gyro[1],
                  s.gyro[2]);
    out << buf;
  }
}

// Per-sample Euclidean norm of the acceleration vector.
inline std::vector<double> accel_magnitude(const SampleStream& stream) {
  std::vector<double> mag(stream.samples.size());
  for (std::size_t i = 0; i < stream.samples.size(); ++i) {
    const auto& a = stream.samples[i].accel;
    mag[i] = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  }
  return mag;
}

// Centered moving average; edges use truncated windows.
inline std::vector<double> smooth(const std::vector<double>& signal, int window) {
  if (window < 1 || window % 2 == 0)
    throw ConfigError("smoothing window must be odd and >= 1, got " +
                      std::to_string(window));
  if (window == 1) return signal;
  const int n = static_cast<int>(signal.size());
  const int half = window / 2;
  std::vector<double> out(signal.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += signal[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

// Subtracts a running mean, leaving only the oscillatory part of the signal.
inline std::vector<double> detrend(const std::vector<double>& signal, int window) {
  const auto baseline = smooth(signal, window);
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) out[i] = signal[i] - baseline[i];
  return out;
}

// Default smoothing window: a quarter second of samples, forced odd.
inline int default_smooth_window(double rate_hz) {
  int w = static_cast<int>(std::lround(0.25 * rate_hz));
  if (w < 1) w = 1;
  if (w % 2 == 0) ++w;
  return w;
}

}  // namespace pdrmm

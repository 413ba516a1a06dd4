#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sts {

using TimestampMs = std::int64_t;

inline constexpr double kMsPerSec = 1000.0;

/// A sampled trajectory point: planar position in meters, timestamp in
/// integer milliseconds since epoch.
struct TrajPoint {
  double x = 0.0;
  double y = 0.0;
  TimestampMs t = 0;
};

/// An ordered sequence of sampled points owned by one client.
/// Valid trajectories have at least two points and strictly increasing
/// timestamps; see validate_trajectory().
struct Trajectory {
  std::string client_id;
  std::string local_id;
  std::vector<TrajPoint> points;

  TimestampMs span_start() const { return points.front().t; }
  TimestampMs span_end() const { return points.back().t; }
  std::size_t segment_count() const {
    return points.size() < 2 ? 0 : points.size() - 1;
  }
};

/// Throws std::invalid_argument if the trajectory breaks a basic invariant
/// (fewer than two points, non-increasing timestamps, non-finite coords,
/// negative timestamps).
void validate_trajectory(const Trajectory& traj);

/// A time interval in milliseconds. Endpoints are real-valued because
/// close-distance roots are not required to fall on sample ticks.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  double duration_ms() const { return end - start; }
  double duration_s() const { return (end - start) / kMsPerSec; }
};

/// Per-segment linear motion: position(t) = (kx*t + bx, ky*t + by) with t in
/// seconds. The span is kept in integer milliseconds so index interval
/// splits stay exact.
struct SegmentMotion {
  double kx = 0.0;  // m/s
  double ky = 0.0;  // m/s
  double bx = 0.0;  // m, x position at t = 0 s
  double by = 0.0;  // m
  TimestampMs t_start = 0;
  TimestampMs t_end = 0;

  TimeInterval span() const {
    return {static_cast<double>(t_start), static_cast<double>(t_end)};
  }
  double x_at(double t_ms) const { return kx * (t_ms / kMsPerSec) + bx; }
  double y_at(double t_ms) const { return ky * (t_ms / kMsPerSec) + by; }
};

/// Axis-aligned rectangle with closed edges.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool overlaps(const Rect& o) const {
    return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
  }
  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  Rect expanded(double e) const {
    return {xmin - e, ymin - e, xmax + e, ymax + e};
  }
};

/// Linear interpolation of the trajectory position at time t.
/// Sample timestamps reproduce the sample point exactly.
/// Throws std::out_of_range if t is outside the trajectory span.
std::pair<double, double> interpolate_position(const Trajectory& traj,
                                               TimestampMs t);

/// Intersection of two intervals, or nullopt when they are disjoint.
/// A zero-length touch (a.end == b.start) yields a zero-duration interval.
std::optional<TimeInterval> overlapping_span(const TimeInterval& a,
                                             const TimeInterval& b);

/// Motion coefficients of the segment from a to b, time in seconds.
/// Throws std::invalid_argument unless a.t < b.t.
SegmentMotion motion_coeffs(const TrajPoint& a, const TrajPoint& b);

/// The maximal sub-interval of the two segments' overlapping span where the
/// squared point distance stays within delta_d^2. Returns nullopt when the
/// spans do not overlap, the inequality never holds, or the solution has
/// zero duration. Throws std::invalid_argument for delta_d <= 0.
std::optional<TimeInterval> close_distance_interval(const SegmentMotion& s_a,
                                                    const SegmentMotion& s_b,
                                                    double delta_d);

/// Close-distance duration similarity: the sum of close-distance durations
/// (seconds) over all time-overlapping segment pairs. Symmetric, >= 0.
double cdds(const Trajectory& a, const Trajectory& b, double delta_d);

/// Motion coefficients for every segment of a trajectory.
std::vector<SegmentMotion> segment_motions(const Trajectory& traj);

}  // namespace sts

#include "sts/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sts {

void validate_trajectory(const Trajectory& traj) {
  if (traj.points.size() < 2) {
    throw std::invalid_argument("trajectory " + traj.client_id + "/" +
                                traj.local_id + ": needs at least 2 points");
  }
  TimestampMs prev = -1;
  for (const TrajPoint& p : traj.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("trajectory " + traj.client_id + "/" +
                                  traj.local_id + ": non-finite coordinate");
    }
    if (p.t < 0) {
      throw std::invalid_argument("trajectory " + traj.client_id + "/" +
                                  traj.local_id + ": negative timestamp");
    }
    if (p.t <= prev) {
      throw std::invalid_argument("trajectory " + traj.client_id + "/" +
                                  traj.local_id +
                                  ": timestamps not strictly increasing");
    }
    prev = p.t;
  }
}

std::pair<double, double> interpolate_position(const Trajectory& traj,
                                               TimestampMs t) {
  const auto& pts = traj.points;
  if (pts.size() < 2 || t < pts.front().t || t > pts.back().t) {
    throw std::out_of_range("interpolate_position: t outside trajectory span");
  }
  // First point with timestamp >= t.
  auto it = std::lower_bound(
      pts.begin(), pts.end(), t,
      [](const TrajPoint& p, TimestampMs v) { return p.t < v; });
  if (it->t == t) {
    return {it->x, it->y};
  }
  const TrajPoint& b = *it;
  const TrajPoint& a = *(it - 1);
  const double r = static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
  return {a.x + r * (b.x - a.x), a.y + r * (b.y - a.y)};
}

std::optional<TimeInterval> overlapping_span(const TimeInterval& a,
                                             const TimeInterval& b) {
  const double lo = std::max(a.start, b.start);
  const double hi = std::min(a.end, b.end);
  if (lo > hi) {
    return std::nullopt;
  }
  return TimeInterval{lo, hi};
}

SegmentMotion motion_coeffs(const TrajPoint& a, const TrajPoint& b) {
  if (a.t >= b.t) {
    throw std::invalid_argument("motion_coeffs: degenerate segment (t_a >= t_b)");
  }
  const double ta = static_cast<double>(a.t) / kMsPerSec;
  const double tb = static_cast<double>(b.t) / kMsPerSec;
  const double dt = tb - ta;
  SegmentMotion m;
  m.kx = (b.x - a.x) / dt;
  m.ky = (b.y - a.y) / dt;
  m.bx = (a.x * tb - b.x * ta) / dt;
  m.by = (a.y * tb - b.y * ta) / dt;
  m.t_start = a.t;
  m.t_end = b.t;
  return m;
}

std::optional<TimeInterval> close_distance_interval(const SegmentMotion& s_a,
                                                    const SegmentMotion& s_b,
                                                    double delta_d) {
  if (!(delta_d > 0.0)) {
    throw std::invalid_argument("close_distance_interval: delta_d must be > 0");
  }
  const auto ov = overlapping_span(s_a.span(), s_b.span());
  if (!ov || ov->duration_ms() <= 0.0) {
    return std::nullopt;
  }
  // Solve in a span-local frame (u seconds past the overlap start) to keep
  // the quadratic well conditioned for epoch-scale timestamps.
  const double t0s = ov->start / kMsPerSec;
  const double len = ov->duration_ms() / kMsPerSec;
  const double dkx = s_a.kx - s_b.kx;
  const double dky = s_a.ky - s_b.ky;
  const double dx0 = dkx * t0s + (s_a.bx - s_b.bx);
  const double dy0 = dky * t0s + (s_a.by - s_b.by);

  const double a = dkx * dkx + dky * dky;
  const double b = 2.0 * (dkx * dx0 + dky * dy0);
  const double c = dx0 * dx0 + dy0 * dy0 - delta_d * delta_d;

  double lo = 0.0;
  double hi = len;
  if (a == 0.0) {
    // Equal velocities: constant relative position, so b vanishes with a.
    assert(b == 0.0);
    if (c > 0.0) {
      return std::nullopt;
    }
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) {
      return std::nullopt;  // never within reach, or a zero-duration tangency
    }
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1, r2;
    if (q != 0.0) {
      r1 = q / a;
      r2 = c / q;
    } else {  // q == 0 implies c == 0: one root at the origin
      r1 = 0.0;
      r2 = -b / a;
    }
    lo = std::max(lo, std::min(r1, r2));
    hi = std::min(hi, std::max(r1, r2));
    if (hi <= lo) {
      return std::nullopt;
    }
  }
  return TimeInterval{ov->start + lo * kMsPerSec, ov->start + hi * kMsPerSec};
}

std::vector<SegmentMotion> segment_motions(const Trajectory& traj) {
  std::vector<SegmentMotion> out;
  if (traj.points.size() < 2) {
    return out;
  }
  out.reserve(traj.points.size() - 1);
  for (std::size_t i = 0; i + 1 < traj.points.size(); ++i) {
    out.push_back(motion_coeffs(traj.points[i], traj.points[i + 1]));
  }
  return out;
}

double cdds(const Trajectory& a, const Trajectory& b, double delta_d) {
  const auto sa = segment_motions(a);
  const auto sb = segment_motions(b);
  double total_s = 0.0;
  // Both segment lists are time-sorted; enumerate overlapping pairs with a
  // merge sweep. The enumeration order is mirror-symmetric under swapping
  // the arguments, so the floating sum is exactly symmetric too.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    if (sa[i].t_end > sb[j].t_start && sb[j].t_end > sa[i].t_start) {
      if (const auto cdd = close_distance_interval(sa[i], sb[j], delta_d)) {
        total_s += cdd->duration_s();
      }
    }
    if (sa[i].t_end < sb[j].t_end) {
      ++i;
    } else if (sb[j].t_end < sa[i].t_end) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return total_s;
}

}  // namespace sts

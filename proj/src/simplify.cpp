#include "sts/simplify.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace sts {

namespace {

// Deviation of the interior points of [first, last] against the chord, and
// the index of the worst offender (smallest index wins ties).
std::pair<double, std::size_t> max_deviation(const std::vector<TrajPoint>& pts,
                                             std::size_t first,
                                             std::size_t last) {
  const TrajPoint& a = pts[first];
  const TrajPoint& b = pts[last];
  const double dt = static_cast<double>(b.t - a.t);
  double worst = 0.0;
  std::size_t worst_idx = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const TrajPoint& p = pts[i];
    const double r = static_cast<double>(p.t - a.t) / dt;
    const double dx = a.x + r * (b.x - a.x) - p.x;
    const double dy = a.y + r * (b.y - a.y) - p.y;
    const double d = std::hypot(dx, dy);
    if (d > worst) {
      worst = d;
      worst_idx = i;
    }
  }
  return {worst, worst_idx};
}

}  // namespace

double time_sync_deviation(std::span<const TrajPoint> slice) {
  if (slice.size() < 3) {
    return 0.0;
  }
  const TrajPoint& a = slice.front();
  const TrajPoint& b = slice.back();
  const double dt = static_cast<double>(b.t - a.t);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < slice.size(); ++i) {
    const TrajPoint& p = slice[i];
    const double r = static_cast<double>(p.t - a.t) / dt;
    const double dx = a.x + r * (b.x - a.x) - p.x;
    const double dy = a.y + r * (b.y - a.y) - p.y;
    worst = std::max(worst, std::hypot(dx, dy));
  }
  return worst;
}

Trajectory simplify_trajectory(const Trajectory& traj,
                               const SimplifyParams& params) {
  const auto& pts = traj.points;
  Trajectory out;
  out.client_id = traj.client_id;
  out.local_id = traj.local_id;
  if (pts.size() <= 2) {
    out.points = pts;
    return out;
  }

  std::vector<unsigned char> keep(pts.size(), 0);
  keep[0] = 1;
  keep[pts.size() - 1] = 1;

  std::vector<std::pair<std::size_t, std::size_t>> stack;
  stack.emplace_back(0, pts.size() - 1);
  while (!stack.empty()) {
    const auto [first, last] = stack.back();
    stack.pop_back();
    if (last - first < 2) {
      continue;
    }
    const auto [dev, split] = max_deviation(pts, first, last);
    if (dev <= params.theta_sp) {
      continue;  // chord is good enough, interior points drop out
    }
    keep[split] = 1;
    stack.emplace_back(split, last);
    stack.emplace_back(first, split);
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) {
      out.points.push_back(pts[i]);
    }
  }
  return out;
}

}  // namespace sts

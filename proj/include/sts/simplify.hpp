#pragma once

#include <span>

#include "sts/geometry.hpp"

namespace sts {

struct SimplifyParams {
  double theta_sp = 20.0;  // meters, >= 0
};

/// Maximum time-synchronized deviation between the interior points of a
/// slice and the straight segment joining its first and last point.
/// Deviation is measured at equal timestamps, not perpendicularly, so the
/// bound survives interpolation at query time. Empty interior -> 0.
double time_sync_deviation(std::span<const TrajPoint> slice);

/// Douglas-Peucker adapted to time-synchronized deviation: keeps a subset of
/// the original points (timestamps untouched, endpoints preserved) such that
/// the interpolated simplified trajectory never strays more than theta_sp
/// from the original at any time.
Trajectory simplify_trajectory(const Trajectory& traj,
                               const SimplifyParams& params);

}  // namespace sts

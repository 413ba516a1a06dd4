#pragma once

#include <cstdint>
#include <vector>

#include "sts/geometry.hpp"

namespace sts {

/// Random-waypoint generator settings. cluster_centers == 0 distributes
/// waypoints uniformly; otherwise every trajectory keeps to a Gaussian blob
/// around one of the centers (polycentric city model).
struct SyntheticSpec {
  int num_clients = 10;
  int trajs_per_client = 5;
  int points_per_traj = 50;
  double space_side = 10'000.0;   // meters
  double time_horizon_s = 7'200.0;
  int cluster_centers = 0;
  double cluster_sigma = 0.0;     // 0 -> space_side / 20
  double speed_min = 1.0;         // m/s
  double speed_max = 15.0;
  double sample_interval_s = 5.0;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

/// Deterministic under the seed; client ids are c000.., local ids t000...
std::vector<Trajectory> generate_synthetic(const SyntheticSpec& spec);

}  // namespace sts

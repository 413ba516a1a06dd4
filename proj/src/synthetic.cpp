#include "sts/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sts/laplace.hpp"

namespace sts {

void SyntheticSpec::validate() const {
  if (num_clients <= 0 || trajs_per_client <= 0 || points_per_traj < 2) {
    throw std::invalid_argument("SyntheticSpec: counts must be positive");
  }
  if (!(space_side > 0.0) || !(time_horizon_s > 0.0) ||
      !(sample_interval_s > 0.0)) {
    throw std::invalid_argument("SyntheticSpec: sizes must be positive");
  }
  if (cluster_centers < 0 || !(speed_min > 0.0) || !(speed_max >= speed_min)) {
    throw std::invalid_argument("SyntheticSpec: bad cluster/speed settings");
  }
  const double duration = (points_per_traj - 1) * sample_interval_s;
  if (duration >= time_horizon_s) {
    throw std::invalid_argument(
        "SyntheticSpec: trajectory duration exceeds the time horizon");
  }
}

namespace {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Gaussian offset truncated at two sigma, so every waypoint of a clustered
// trajectory (and every interpolated point between them) stays within 2
// sigma of its home center.
Vec2 truncated_gaussian(RandomStream& rng, double sigma) {
  while (true) {
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double r = sigma * std::sqrt(-2.0 * std::log(u1));
    if (r <= 2.0 * sigma) {
      const double phi = 2.0 * std::numbers::pi * u2;
      return {r * std::cos(phi), r * std::sin(phi)};
    }
  }
}

}  // namespace

std::vector<Trajectory> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  RandomStream rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL);
  const double d = spec.space_side;
  const double sigma =
      spec.cluster_sigma > 0.0 ? spec.cluster_sigma : d / 20.0;

  std::vector<Vec2> centers;
  for (int i = 0; i < spec.cluster_centers; ++i) {
    centers.push_back({0.1 * d + 0.8 * d * rng.uniform01(),
                       0.1 * d + 0.8 * d * rng.uniform01()});
  }

  const auto pick_waypoint = [&](int home) -> Vec2 {
    if (centers.empty()) {
      return {d * rng.uniform01(), d * rng.uniform01()};
    }
    const Vec2 c = centers[home];
    const Vec2 off = truncated_gaussian(rng, sigma);
    return {std::clamp(c.x + off.x, 0.0, d), std::clamp(c.y + off.y, 0.0, d)};
  };

  const double duration_s = (spec.points_per_traj - 1) * spec.sample_interval_s;
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(spec.num_clients) *
              spec.trajs_per_client);
  char idbuf[32];
  for (int c = 0; c < spec.num_clients; ++c) {
    std::snprintf(idbuf, sizeof(idbuf), "c%03d", c);
    const std::string client_id = idbuf;
    for (int k = 0; k < spec.trajs_per_client; ++k) {
      Trajectory traj;
      traj.client_id = client_id;
      std::snprintf(idbuf, sizeof(idbuf), "%s-t%03d", client_id.c_str(), k);
      traj.local_id = idbuf;

      const int home =
          centers.empty()
              ? 0
              : static_cast<int>(rng.next_u64() % centers.size());
      const double t0_s =
          (spec.time_horizon_s - duration_s) * rng.uniform01();
      Vec2 pos = pick_waypoint(home);
      Vec2 target = pick_waypoint(home);
      double speed =
          spec.speed_min + (spec.speed_max - spec.speed_min) * rng.uniform01();

      traj.points.reserve(spec.points_per_traj);
      for (int p = 0; p < spec.points_per_traj; ++p) {
        const double t_s = t0_s + p * spec.sample_interval_s;
        traj.points.push_back(
            {pos.x, pos.y, static_cast<TimestampMs>(std::llround(t_s * 1000.0))});
        double remaining = speed * spec.sample_interval_s;
        while (remaining > 0.0) {
          const double dx = target.x - pos.x;
          const double dy = target.y - pos.y;
          const double dist = std::hypot(dx, dy);
          if (dist <= remaining) {
            pos = target;
            remaining -= dist;
            target = pick_waypoint(home);
            speed = spec.speed_min +
                    (spec.speed_max - spec.speed_min) * rng.uniform01();
          } else {
            pos.x += dx / dist * remaining;
            pos.y += dy / dist * remaining;
            remaining = 0.0;
          }
        }
      }
      out.push_back(std::move(traj));
    }
  }
  return out;
}

}  // namespace sts

#include "sts/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sts {

namespace {

// splitmix64, used only to spread seed material.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void NoiseParams::validate() const {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("NoiseParams: b must be finite and > 0");
  }
  if (!(theta_ob > 0.0) || !std::isfinite(theta_ob)) {
    throw std::invalid_argument("NoiseParams: theta_ob must be finite and > 0");
  }
}

RandomStream client_stream(std::uint64_t root_seed,
                           std::string_view client_id) {
  return RandomStream(mix64(root_seed ^ fnv1a(client_id)));
}

double normalization_constant(const NoiseParams& params) {
  params.validate();
  return 1.0 / (1.0 - std::exp(-params.theta_ob / params.b));
}

double bounded_laplace_cdf(double x, const NoiseParams& params) {
  params.validate();
  if (x < -params.theta_ob || x > params.theta_ob) {
    throw std::domain_error("bounded_laplace_cdf: x outside support");
  }
  const double lam = normalization_constant(params);
  if (x < 0.0) {
    return 0.5 * lam *
           (std::exp(x / params.b) - std::exp(-params.theta_ob / params.b));
  }
  return 0.5 + 0.5 * lam * (1.0 - std::exp(-x / params.b));
}

double inverse_cdf(double y, const NoiseParams& params) {
  // Inversion of the CDF branches; maps (0,1) onto (-theta_ob, theta_ob)
  // with F(inverse_cdf(y)) == y.
  const double inv_lam = 1.0 - std::exp(-params.theta_ob / params.b);
  double x;
  if (y <= 0.5) {
    x = params.b * std::log(1.0 - inv_lam + 2.0 * inv_lam * y);
  } else {
    x = -params.b * std::log(1.0 - inv_lam + 2.0 * inv_lam * (1.0 - y));
  }
  return std::clamp(x, -params.theta_ob, params.theta_ob);
}

double sample_noise(const NoiseParams& params, RandomStream& rng) {
  params.validate();
  return inverse_cdf(rng.uniform01(), params);
}

Trajectory obfuscate_trajectory(const Trajectory& traj,
                                const NoiseParams& params, RandomStream& rng) {
  params.validate();
  Trajectory out = traj;
  for (TrajPoint& p : out.points) {
    p.x += sample_noise(params, rng);
    p.y += sample_noise(params, rng);
  }
  return out;
}

}  // namespace sts

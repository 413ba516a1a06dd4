#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "sts/geometry.hpp"

namespace sts {

/// Parameters of the bounded Laplace noise distribution: density
/// lambda/(2b) * exp(-|x|/b) supported on [-theta_ob, theta_ob].
struct NoiseParams {
  double b = 20.0 / 3.0;   // distribution bias, > 0
  double theta_ob = 20.0;  // support bound, > 0
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// Deterministic uniform stream. Wraps std::mt19937_64 (whose output
/// sequence the standard pins down) and converts to doubles manually so the
/// stream is reproducible across platforms and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in the open interval (0, 1).
  double uniform01() {
    std::uint64_t bits;
    do {
      bits = eng_() >> 11;
    } while (bits == 0);
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

/// Stream for one client, derived from the root seed and the client id so
/// runs are reproducible regardless of scheduling.
RandomStream client_stream(std::uint64_t root_seed, std::string_view client_id);

/// Normalization constant lambda = (1 - exp(-theta_ob/b))^-1, always > 1.
double normalization_constant(const NoiseParams& params);

/// CDF of the bounded Laplace distribution. x must lie in the support;
/// throws std::domain_error otherwise. F(-theta)=0, F(0)=0.5, F(theta)=1.
double bounded_laplace_cdf(double x, const NoiseParams& params);

/// Inverse-CDF transform of y in (0,1); exposed for testing.
double inverse_cdf(double y, const NoiseParams& params);

/// One noise draw, always within [-theta_ob, theta_ob].
double sample_noise(const NoiseParams& params, RandomStream& rng);

/// Adds independent bounded noise to x and y of every point. Timestamps,
/// ids and point count are unchanged; each coordinate moves at most
/// theta_ob.
Trajectory obfuscate_trajectory(const Trajectory& traj,
                                const NoiseParams& params, RandomStream& rng);

}  // namespace sts

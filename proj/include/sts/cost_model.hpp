#pragma once

namespace sts {

/// Parameters of the analytical backtracking-cost model: a balanced
/// quadtree over a square space of side d with cells of side c, queried
/// with expanded MBRs of width m and height n (m >= n).
struct CostParams {
  double d = 0.0;  // space side, meters
  double c = 0.0;  // cell side, meters
  double m = 0.0;  // expanded MBR width
  double n = 0.0;  // expanded MBR height

  void validate() const;  // throws std::invalid_argument
};

struct BacktrackCost {
  double expected = 0.0;  // E(bd), levels
  double bound = 0.0;     // h - I + 1
  int height = 0;         // h = floor(log2(d/c))
  int lowest_level = 0;   // I = floor(log2(d/2m))
};

/// Closed-form expected backtracking distance
///   E(bd) = h - 2I + (I+1) * (d-2m)(d-2n) / ((d-m)(d-n))
/// together with its bound h - I + 1 (always >= E(bd)).
BacktrackCost expected_backtrack_distance(const CostParams& p);

/// Order-of-magnitude node-access estimate 4^(h-I) * avg_segments *
/// num_queries for a backtracking join.
double total_cost_estimate(const CostParams& p, double avg_segments,
                           double num_queries);

}  // namespace sts

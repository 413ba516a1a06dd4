#include "sts/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sts {

void CostParams::validate() const {
  if (!(m >= n) || !(n > 0.0)) {
    throw std::invalid_argument("CostParams: need m >= n > 0");
  }
  if (!(d >= 2.0 * m)) {
    throw std::invalid_argument("CostParams: need d >= 2m");
  }
  if (!(c > 0.0) || !(c <= d)) {
    throw std::invalid_argument("CostParams: need 0 < c <= d");
  }
}

BacktrackCost expected_backtrack_distance(const CostParams& p) {
  p.validate();
  BacktrackCost out;
  out.height = static_cast<int>(std::floor(std::log2(p.d / p.c)));
  out.lowest_level = static_cast<int>(std::floor(std::log2(p.d / (2.0 * p.m))));
  const double h = out.height;
  const double levels = out.lowest_level;
  const double ratio = (p.d - 2.0 * p.m) * (p.d - 2.0 * p.n) /
                       ((p.d - p.m) * (p.d - p.n));
  out.expected = h - 2.0 * levels + (levels + 1.0) * ratio;
  out.bound = h - levels + 1.0;
  return out;
}

double total_cost_estimate(const CostParams& p, double avg_segments,
                           double num_queries) {
  p.validate();
  const int h = static_cast<int>(std::floor(std::log2(p.d / p.c)));
  const int levels = static_cast<int>(std::floor(std::log2(p.d / (2.0 * p.m))));
  return std::pow(4.0, h - levels) * avg_segments * num_queries;
}

}  // namespace sts

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sts/index.hpp"
#include "sts/join.hpp"
#include "sts/metrics.hpp"
#include "sts/results.hpp"

namespace sts {

struct PipelineConfig {
  QueryParams query;
  IndexConfig index;
  bool auto_space_bounds = true;  // fit space_bounds to the ingested pieces
  double noise_b = 0.0;           // 0 -> theta_ob / 3
  std::uint64_t seed = 1;
  int threads = 0;
};

struct PipelineOutput {
  std::vector<ResultRow> results;
  JoinMetrics join_metrics;
  JoinMetrics build_metrics;
  std::string index_stats;
  std::uint64_t stored_pieces = 0;
  int index_height = 0;
  double mean_leaf_side = 0.0;
  double mean_backtrack_distance = 0.0;
};

/// Client-side preparation of one data set: simplify, obfuscate (skipped
/// when theta_ob == 0), split at temporal interval boundaries and tag every
/// piece with its original segment range. Deterministic under the seed.
std::vector<SegmentRef> prepare_data_pieces(
    const std::vector<Trajectory>& data, const PipelineConfig& config);

/// Smallest rectangle containing every piece endpoint (padded when
/// degenerate).
Rect fit_space_bounds(const std::vector<SegmentRef>& pieces);

/// Full run: simplify -> obfuscate -> build -> server join (configured
/// mode) -> exact client verification, with results sorted by
/// (client, data trajectory, query trajectory).
PipelineOutput run_pipeline(const std::vector<Trajectory>& data,
                            const std::vector<Trajectory>& queries,
                            const PipelineConfig& config);

/// Exhaustive reference join: every couple, exact CDDS, no index, no
/// pruning, independent of the server code paths. delta_t == 0 keeps
/// couples with positive similarity, matching the engine's convention.
std::vector<ResultRow> oracle_join(const std::vector<Trajectory>& data,
                                   const std::vector<Trajectory>& queries,
                                   double delta_d, double delta_t,
                                   int threads = 0);

}  // namespace sts

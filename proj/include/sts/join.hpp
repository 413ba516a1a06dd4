#pragma once

#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sts/index.hpp"

namespace sts {

enum class JoinMode { kPlain, kBacktrack, kBacktrackBound };

const char* to_string(JoinMode mode);

struct QueryParams {
  double delta_d = 20.0;   // join distance threshold, meters
  double delta_t = 20.0;   // join duration threshold, seconds
  double theta_sp = 20.0;  // simplification threshold used at ingestion
  double theta_ob = 20.0;  // obfuscation bound used at ingestion
  JoinMode mode = JoinMode::kBacktrack;

  /// Query MBRs grow by this much on each side so that no pair surviving on
  /// the original data can be missed on the simplified-and-obfuscated data.
  double expansion() const { return delta_d + theta_sp + theta_ob; }

  /// Distance threshold of the CDDS upper bound (Euclidean obfuscation
  /// shift, hence the sqrt(2) factor, unlike the per-axis MBR expansion).
  double bound_distance() const {
    return delta_d + theta_sp + std::sqrt(2.0) * theta_ob;
  }

  /// delta_t == 0 is read as "positive similarity", not "any pair".
  bool passes(double cdds_s) const {
    return delta_t > 0.0 ? cdds_s >= delta_t : cdds_s > 0.0;
  }

  void validate() const;  // throws std::invalid_argument
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// A query segment MBR expanded by expansion() per side, with the two
/// pivot corners used to locate leaves and backtracking ancestors. The
/// pivots are always opposite corners, so any node covering both covers the
/// whole expanded rectangle.
struct ExpandedMbr {
  Rect rect;
  Point2 lower_pivot;  // corner by the segment start
  Point2 upper_pivot;  // corner by the segment end
};

ExpandedMbr expand_mbr(const SegmentRef& seg, const QueryParams& params);

/// A stored data piece paired with the original (non-split) query segment
/// it was found for.
struct CandidatePair {
  SegmentRef data;
  std::string query_traj_id;
  int query_segment_index = 0;
};

struct CoupleKey {
  std::string client_id;
  std::string data_traj_id;
  std::string query_traj_id;

  auto operator<=>(const CoupleKey&) const = default;
};

/// Candidate pairs grouped per (client, data trajectory, query trajectory)
/// couple. Ordered so downstream output is deterministic.
using CandidateGroups = std::map<CoupleKey, std::vector<CandidatePair>>;

/// Server side of the join: finds, for every query trajectory, all stored
/// pieces whose expanded-MBR filter cannot rule them out, deduplicated per
/// (data piece, original query segment) and grouped by couple. In
/// kBacktrackBound mode, couples whose CDDS upper bound stays below delta_t
/// are pruned before the groups are handed to the clients.
/// Queries run over an immutable index snapshot; distinct query
/// trajectories are processed in parallel (threads == 0 means default).
CandidateGroups server_join(const StsIndex& index,
                            const std::vector<Trajectory>& queries,
                            const QueryParams& params, Metrics& metrics,
                            int threads = 0);

/// CDDS upper bound of one couple: the sum of close-distance durations of
/// the candidate pairs at the inflated bound_distance() threshold, computed
/// on the simplified-and-obfuscated pieces. Never below the couple's exact
/// CDDS on the original data.
double upper_cdds(const std::vector<CandidatePair>& pairs,
                  const Trajectory& query, const QueryParams& params);

/// Drops groups whose upper bound stays below delta_t. Returns the number
/// of groups removed. Groups must be complete (all surviving candidates of
/// the couple present).
std::size_t prune_by_bound(
    CandidateGroups& groups,
    const std::unordered_map<std::string, const Trajectory*>& queries_by_id,
    const QueryParams& params);

/// Distinct clients appearing in the groups.
std::size_t count_clients(const CandidateGroups& groups);

/// Total candidate pairs across all groups.
std::size_t count_pairs(const CandidateGroups& groups);

}  // namespace sts

#pragma once

#include <map>
#include <string>
#include <vector>

#include "sts/geometry.hpp"
#include "sts/metrics.hpp"
#include "sts/results.hpp"

namespace sts {

/// Loaded trajectories plus one warning line per rejected row/trajectory.
struct LoadReport {
  std::vector<Trajectory> trajectories;
  std::vector<std::string> warnings;
};

/// Reads the trajectory CSV (header: client_id,traj_id,seq,t_ms,x_m,y_m).
/// Points are grouped by (client_id, traj_id) in first-appearance order and
/// sorted by seq. Malformed rows are rejected with their line number;
/// trajectories with non-increasing timestamps (or fewer than two points)
/// are rejected whole. Throws std::runtime_error if the file cannot be
/// opened or the header does not match.
LoadReport load_trajectories(const std::string& path);

/// Inverse of load_trajectories for valid trajectory sets; coordinates are
/// written with enough digits to round-trip exactly.
void write_trajectories(const std::string& path,
                        const std::vector<Trajectory>& trajectories);

/// Results CSV (header: query_traj,client_id,data_traj,cdds_s), similarity
/// with six decimals.
void write_results(const std::string& path,
                   const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results(const std::string& path);

/// Flat key=value metrics file; extra pairs are appended after the counter
/// block in the given order.
void write_metrics(const std::string& path, const JoinMetrics& metrics,
                   const std::vector<std::pair<std::string, std::string>>&
                       extra = {});

}  // namespace sts

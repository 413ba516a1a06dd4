#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sts/join.hpp"

namespace sts {

/// Simulated client-side store. Holds the client's original trajectories
/// and performs exact verification of candidate batches the server sends.
/// One store per client; verification of a single store is exclusive, but
/// distinct clients may verify in parallel.
class ClientStore {
 public:
  explicit ClientStore(std::string client_id)
      : client_id_(std::move(client_id)) {}

  const std::string& client_id() const { return client_id_; }

  /// Throws std::invalid_argument when the trajectory belongs to another
  /// client or the local id is already taken.
  void register_trajectory(Trajectory traj);

  const Trajectory* find(const std::string& local_id) const;

  struct Verified {
    std::string data_traj_id;
    std::string query_traj_id;
    double cdds_s = 0.0;
  };

  /// Exact per-couple verification: maps every received piece back to its
  /// original segment range, deduplicates (original data segment, original
  /// query segment) pairs, sums their close-distance durations on the
  /// original coordinates, and keeps couples passing the delta_t rule.
  /// Groups addressed to other clients are ignored. Throws
  /// std::runtime_error when a batch names an unknown local id.
  std::vector<Verified> verify_pairs(
      const CandidateGroups& groups, const QueryParams& params,
      const std::unordered_map<std::string, const Trajectory*>& queries_by_id)
      const;

 private:
  std::string client_id_;
  std::map<std::string, Trajectory> trajectories_;
};

}  // namespace sts

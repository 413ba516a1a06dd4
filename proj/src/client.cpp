#include "sts/client.hpp"

#include <set>
#include <stdexcept>

namespace sts {

void ClientStore::register_trajectory(Trajectory traj) {
  if (traj.client_id != client_id_) {
    throw std::invalid_argument("ClientStore " + client_id_ +
                                ": trajectory belongs to " + traj.client_id);
  }
  validate_trajectory(traj);
  const std::string local_id = traj.local_id;
  if (!trajectories_.emplace(local_id, std::move(traj)).second) {
    throw std::invalid_argument("ClientStore " + client_id_ +
                                ": duplicate local id " + local_id);
  }
}

const Trajectory* ClientStore::find(const std::string& local_id) const {
  const auto it = trajectories_.find(local_id);
  return it == trajectories_.end() ? nullptr : &it->second;
}

std::vector<ClientStore::Verified> ClientStore::verify_pairs(
    const CandidateGroups& groups, const QueryParams& params,
    const std::unordered_map<std::string, const Trajectory*>& queries_by_id)
    const {
  std::vector<Verified> out;
  std::unordered_map<std::string, std::vector<SegmentMotion>> motion_cache;
  const auto motions_of = [&](const Trajectory& t) -> const std::vector<SegmentMotion>& {
    auto [it, fresh] = motion_cache.try_emplace(t.client_id + '\x1f' + t.local_id);
    if (fresh) {
      it->second = segment_motions(t);
    }
    return it->second;
  };

  for (const auto& [key, pairs] : groups) {
    if (key.client_id != client_id_) {
      continue;
    }
    const Trajectory* data = find(key.data_traj_id);
    if (data == nullptr) {
      throw std::runtime_error("ClientStore " + client_id_ +
                               ": batch names unknown local id " +
                               key.data_traj_id);
    }
    const auto qit = queries_by_id.find(key.query_traj_id);
    if (qit == queries_by_id.end()) {
      throw std::runtime_error("ClientStore " + client_id_ +
                               ": batch names unknown query id " +
                               key.query_traj_id);
    }
    const std::vector<SegmentMotion>& dm = motions_of(*data);
    const std::vector<SegmentMotion>& qm = motions_of(*qit->second);

    // The same original pair can arrive through several pieces; sum each
    // pair once, in a canonical order.
    std::set<std::pair<int, int>> original_pairs;
    for (const CandidatePair& pair : pairs) {
      const int hi = std::min(pair.data.src_end, static_cast<int>(dm.size()));
      for (int o = pair.data.src_begin; o < hi; ++o) {
        original_pairs.emplace(o, pair.query_segment_index);
      }
    }
    double total_s = 0.0;
    for (const auto& [o, q] : original_pairs) {
      if (const auto cdd =
              close_distance_interval(dm[o], qm.at(q), params.delta_d)) {
        total_s += cdd->duration_s();
      }
    }
    if (params.passes(total_s)) {
      out.push_back({key.data_traj_id, key.query_traj_id, total_s});
    }
  }
  return out;
}

}  // namespace sts

#pragma once

#include <string>
#include <tuple>

namespace sts {

/// One verified join result: the couple plus its exact similarity.
struct ResultRow {
  std::string query_traj;
  std::string client_id;
  std::string data_traj;
  double cdds_s = 0.0;

  /// Output files are sorted by (client, data trajectory, query trajectory).
  friend bool operator<(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.client_id, a.data_traj, a.query_traj) <
           std::tie(b.client_id, b.data_traj, b.query_traj);
  }
};

}  // namespace sts

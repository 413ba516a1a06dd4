#include "sts/metrics.hpp"

#include <sstream>

namespace sts {

std::string JoinMetrics::to_text() const {
  std::ostringstream os;
  os << "node_accesses=" << node_accesses << "\n";
  os << "candidate_pairs=" << candidate_pairs << "\n";
  os << "segment_pairs_sent=" << segment_pairs_sent << "\n";
  os << "clients_contacted=" << clients_contacted << "\n";
  os << "groups_pruned=" << groups_pruned << "\n";
  os << "backtrack_calls=" << backtrack_calls << "\n";
  os << "backtrack_steps=" << backtrack_steps << "\n";
  os << "wall_time_ms=" << wall_time_ms << "\n";
  return os.str();
}

}  // namespace sts

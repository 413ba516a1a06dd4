#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace sts {

/// Plain counter snapshot, safe to copy and serialize.
struct JoinMetrics {
  std::uint64_t node_accesses = 0;
  std::uint64_t candidate_pairs = 0;
  std::uint64_t segment_pairs_sent = 0;
  std::uint64_t clients_contacted = 0;
  std::uint64_t groups_pruned = 0;
  std::uint64_t backtrack_calls = 0;
  std::uint64_t backtrack_steps = 0;
  double wall_time_ms = 0.0;

  std::string to_text() const;
};

/// Concurrent counters shared by index traversal and the join kernels.
/// Increments may come from any thread.
class Metrics {
 public:
  void add_node_access(std::uint64_t n = 1) {
    node_accesses_.fetch_add(n, std::memory_order_relaxed);
  }
  void add_candidate_pairs(std::uint64_t n) {
    candidate_pairs_.fetch_add(n, std::memory_order_relaxed);
  }
  void add_backtrack(std::uint64_t steps) {
    backtrack_calls_.fetch_add(1, std::memory_order_relaxed);
    backtrack_steps_.fetch_add(steps, std::memory_order_relaxed);
  }
  void set_sent(std::uint64_t pairs, std::uint64_t clients,
                std::uint64_t pruned) {
    segment_pairs_sent_.store(pairs, std::memory_order_relaxed);
    clients_contacted_.store(clients, std::memory_order_relaxed);
    groups_pruned_.store(pruned, std::memory_order_relaxed);
  }
  void set_wall_time_ms(double ms) { wall_time_ms_ = ms; }

  std::uint64_t node_accesses() const {
    return node_accesses_.load(std::memory_order_relaxed);
  }

  JoinMetrics snapshot() const {
    JoinMetrics m;
    m.node_accesses = node_accesses_.load(std::memory_order_relaxed);
    m.candidate_pairs = candidate_pairs_.load(std::memory_order_relaxed);
    m.segment_pairs_sent = segment_pairs_sent_.load(std::memory_order_relaxed);
    m.clients_contacted = clients_contacted_.load(std::memory_order_relaxed);
    m.groups_pruned = groups_pruned_.load(std::memory_order_relaxed);
    m.backtrack_calls = backtrack_calls_.load(std::memory_order_relaxed);
    m.backtrack_steps = backtrack_steps_.load(std::memory_order_relaxed);
    m.wall_time_ms = wall_time_ms_;
    return m;
  }

 private:
  std::atomic<std::uint64_t> node_accesses_{0};
  std::atomic<std::uint64_t> candidate_pairs_{0};
  std::atomic<std::uint64_t> segment_pairs_sent_{0};
  std::atomic<std::uint64_t> clients_contacted_{0};
  std::atomic<std::uint64_t> groups_pruned_{0};
  std::atomic<std::uint64_t> backtrack_calls_{0};
  std::atomic<std::uint64_t> backtrack_steps_{0};
  double wall_time_ms_ = 0.0;
};

}  // namespace sts

#include "sts/join.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sts {

const char* to_string(JoinMode mode) {
  switch (mode) {
    case JoinMode::kPlain:
      return "plain";
    case JoinMode::kBacktrack:
      return "backtrack";
    case JoinMode::kBacktrackBound:
      return "backtrack-bound";
  }
  return "?";
}

void QueryParams::validate() const {
  if (!(delta_d > 0.0)) {
    throw std::invalid_argument("QueryParams: delta_d must be > 0");
  }
  if (delta_t < 0.0 || theta_sp < 0.0 || theta_ob < 0.0) {
    throw std::invalid_argument(
        "QueryParams: delta_t, theta_sp, theta_ob must be >= 0");
  }
}

ExpandedMbr expand_mbr(const SegmentRef& seg, const QueryParams& params) {
  ExpandedMbr out;
  out.rect = seg.mbr.expanded(params.expansion());
  // Nearest corner per axis. Ties resolve to the min edge for the lower
  // pivot and the max edge for the upper one, so the pivots always end up
  // on opposite corners of the rectangle.
  out.lower_pivot.x = seg.sx <= seg.ex ? out.rect.xmin : out.rect.xmax;
  out.lower_pivot.y = seg.sy <= seg.ey ? out.rect.ymin : out.rect.ymax;
  out.upper_pivot.x = seg.sx <= seg.ex ? out.rect.xmax : out.rect.xmin;
  out.upper_pivot.y = seg.sy <= seg.ey ? out.rect.ymax : out.rect.ymin;
  return out;
}

namespace {

struct PerQueryState {
  std::vector<CandidatePair> collected;
};

void join_one_query(const StsIndex& index, const Trajectory& query,
                    const QueryParams& params, Metrics& metrics,
                    std::vector<CandidatePair>& collected) {
  const std::vector<SegmentRef> pieces =
      split_to_leaf_intervals(query, index.config());
  if (pieces.empty()) {
    return;
  }
  std::vector<ExpandedMbr> exp;
  exp.reserve(pieces.size());
  for (const SegmentRef& p : pieces) {
    exp.push_back(expand_mbr(p, params));
  }
  const std::uint64_t nsegs = query.segment_count();

  const bool plain = params.mode == JoinMode::kPlain;
  const TemporalEntry* entry = nullptr;
  TimestampMs entry_start = -1;
  const QuadNode* remembered_leaf = nullptr;
  const QuadNode* last_start = nullptr;  // previous BFS root, same tree
  std::unordered_set<std::uint64_t> seen;  // (piece uid, query segment)

  const Rect& space = index.config().space_bounds;
  const auto clamp_point = [&space](Point2 p) {
    p.x = std::clamp(p.x, space.xmin, space.xmax);
    p.y = std::clamp(p.y, space.ymin, space.ymax);
    return p;
  };

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const SegmentRef& piece = pieces[i];
    if (!exp[i].rect.overlaps(space)) {
      // nothing indexed can overlap this query segment
      entry = nullptr;
      entry_start = -1;
      remembered_leaf = nullptr;
      last_start = nullptr;
      continue;
    }
    const TimestampMs start = index.interval_start_of(piece.motion.t_start);
    const bool new_tree = (i == 0) || start != entry_start;
    if (plain || new_tree) {
      entry = index.lookup(piece.motion.t_start, metrics);
      entry_start = start;
      if (!plain) {
        remembered_leaf = nullptr;
        last_start = nullptr;
      }
    }
    if (entry == nullptr) {
      continue;  // no data stored within this time interval
    }

    const QuadNode* bfs_root;
    if (plain) {
      bfs_root = entry->root.get();
    } else {
      // Seed at the leaf covering the lower pivot when we have one, else
      // climb from wherever the previous segment left us. The ancestor must
      // cover both pivots so the whole expanded MBR sits below it.
      const QuadNode* n = remembered_leaf;
      if (n == nullptr) {
        n = last_start;
      }
      if (n == nullptr) {
        n = index.find_node(entry->root.get(), exp[i].lower_pivot.x,
                            exp[i].lower_pivot.y, metrics);
      }
      bfs_root = index.backtrack_covering(
          n, exp[i].lower_pivot.x, exp[i].lower_pivot.y, exp[i].upper_pivot.x,
          exp[i].upper_pivot.y, metrics);
      last_start = bfs_root;
    }

    const bool has_next = i + 1 < pieces.size();
    const Point2 next_pivot =
        has_next ? clamp_point(exp[i + 1].lower_pivot) : Point2{};
    remembered_leaf = nullptr;

    std::deque<const QuadNode*> queue;
    queue.push_back(bfs_root);
    while (!queue.empty()) {
      const QuadNode* node = queue.front();
      queue.pop_front();
      metrics.add_node_access();
      if (!node->is_leaf()) {
        for (int c = 0; c < 4; ++c) {
          if (node->child(c)->mbr().overlaps(exp[i].rect)) {
            queue.push_back(node->child(c));
          }
        }
        continue;
      }
      for (const SegmentRef* ref : index.leaf_candidates(
               *entry, *node, exp[i].rect, piece.motion.span())) {
        const std::uint64_t key =
            ref->uid * nsegs + static_cast<std::uint64_t>(piece.segment_index);
        if (seen.insert(key).second) {
          collected.push_back(
              {*ref, query.local_id, piece.segment_index});
        }
      }
      if (has_next && node->covers(next_pivot.x, next_pivot.y)) {
        remembered_leaf = node;
      }
    }
  }
  metrics.add_candidate_pairs(collected.size());
}

std::vector<SegmentMotion> query_motions(const Trajectory& query) {
  return segment_motions(query);
}

}  // namespace

double upper_cdds(const std::vector<CandidatePair>& pairs,
                  const Trajectory& query, const QueryParams& params) {
  if (pairs.empty()) {
    return 0.0;
  }
  const std::vector<SegmentMotion> motions = query_motions(query);
  const double bound_d = params.bound_distance();
  double total = 0.0;
  for (const CandidatePair& pair : pairs) {
    const SegmentMotion& q = motions.at(pair.query_segment_index);
    if (const auto cdd =
            close_distance_interval(pair.data.motion, q, bound_d)) {
      total += cdd->duration_s();
    }
  }
  return total;
}

std::size_t prune_by_bound(
    CandidateGroups& groups,
    const std::unordered_map<std::string, const Trajectory*>& queries_by_id,
    const QueryParams& params) {
  std::size_t pruned = 0;
  for (auto it = groups.begin(); it != groups.end();) {
    const Trajectory* query = queries_by_id.at(it->first.query_traj_id);
    if (upper_cdds(it->second, *query, params) < params.delta_t) {
      it = groups.erase(it);
      ++pruned;
    } else {
      ++it;
    }
  }
  return pruned;
}

std::size_t count_clients(const CandidateGroups& groups) {
  std::size_t clients = 0;
  const std::string* prev = nullptr;
  for (const auto& [key, pairs] : groups) {
    if (prev == nullptr || key.client_id != *prev) {
      ++clients;
      prev = &key.client_id;
    }
  }
  return clients;
}

std::size_t count_pairs(const CandidateGroups& groups) {
  std::size_t total = 0;
  for (const auto& [key, pairs] : groups) {
    total += pairs.size();
  }
  return total;
}

CandidateGroups server_join(const StsIndex& index,
                            const std::vector<Trajectory>& queries,
                            const QueryParams& params, Metrics& metrics,
                            int threads) {
  params.validate();
  const int n = static_cast<int>(queries.size());
  std::vector<PerQueryState> states(queries.size());

#ifdef _OPENMP
  const int use_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(use_threads)
  for (int i = 0; i < n; ++i) {
    join_one_query(index, queries[i], params, metrics, states[i].collected);
  }
#else
  (void)threads;
  for (int i = 0; i < n; ++i) {
    join_one_query(index, queries[i], params, metrics, states[i].collected);
  }
#endif

  CandidateGroups groups;
  for (const PerQueryState& st : states) {
    for (const CandidatePair& pair : st.collected) {
      groups[{pair.data.client_id, pair.data.traj_id, pair.query_traj_id}]
          .push_back(pair);
    }
  }

  std::size_t pruned = 0;
  if (params.mode == JoinMode::kBacktrackBound) {
    std::unordered_map<std::string, const Trajectory*> by_id;
    for (const Trajectory& q : queries) {
      by_id[q.local_id] = &q;
    }
    pruned = prune_by_bound(groups, by_id, params);
  }
  metrics.set_sent(count_pairs(groups), count_clients(groups), pruned);
  return groups;
}

}  // namespace sts

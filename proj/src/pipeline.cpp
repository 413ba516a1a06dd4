#include "sts/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sts/client.hpp"
#include "sts/laplace.hpp"
#include "sts/simplify.hpp"

namespace sts {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Original point index for each kept timestamp; timestamps are unique
// within a trajectory, so the lookup is exact.
std::vector<int> kept_point_indices(const Trajectory& original,
                                    const Trajectory& simplified) {
  std::vector<int> out;
  out.reserve(simplified.points.size());
  std::size_t o = 0;
  for (const TrajPoint& p : simplified.points) {
    while (o < original.points.size() && original.points[o].t != p.t) {
      ++o;
    }
    if (o == original.points.size()) {
      throw std::logic_error("simplified point is not an original point");
    }
    out.push_back(static_cast<int>(o));
  }
  return out;
}

}  // namespace

std::vector<SegmentRef> prepare_data_pieces(
    const std::vector<Trajectory>& data, const PipelineConfig& config) {
  // Sort work client-major so each client's noise stream is consumed in a
  // reproducible order no matter how the input list was arranged.
  std::vector<const Trajectory*> sorted;
  sorted.reserve(data.size());
  for (const Trajectory& t : data) {
    sorted.push_back(&t);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Trajectory* a, const Trajectory* b) {
              return std::tie(a->client_id, a->local_id) <
                     std::tie(b->client_id, b->local_id);
            });

  const SimplifyParams sp{config.query.theta_sp};
  NoiseParams noise;
  noise.theta_ob = config.query.theta_ob;
  noise.b = config.noise_b > 0.0 ? config.noise_b
                                 : config.query.theta_ob / 3.0;
  noise.seed = config.seed;

  std::vector<SegmentRef> pieces;
  std::string current_client;
  RandomStream stream(0);
  for (const Trajectory* traj : sorted) {
    validate_trajectory(*traj);
    if (traj->client_id != current_client) {
      current_client = traj->client_id;
      stream = client_stream(config.seed, current_client);
    }
    Trajectory reduced = simplify_trajectory(*traj, sp);
    const std::vector<int> kept = kept_point_indices(*traj, reduced);
    if (config.query.theta_ob > 0.0) {
      reduced = obfuscate_trajectory(reduced, noise, stream);
    }
    for (SegmentRef& piece : split_to_leaf_intervals(reduced, config.index)) {
      piece.src_begin = kept[piece.segment_index];
      piece.src_end = kept[piece.segment_index + 1];
      pieces.push_back(std::move(piece));
    }
  }
  return pieces;
}

Rect fit_space_bounds(const std::vector<SegmentRef>& pieces) {
  if (pieces.empty()) {
    return {0.0, 0.0, 1.0, 1.0};
  }
  Rect r = pieces.front().mbr;
  for (const SegmentRef& p : pieces) {
    r.xmin = std::min(r.xmin, p.mbr.xmin);
    r.ymin = std::min(r.ymin, p.mbr.ymin);
    r.xmax = std::max(r.xmax, p.mbr.xmax);
    r.ymax = std::max(r.ymax, p.mbr.ymax);
  }
  if (!(r.width() > 0.0)) {
    r.xmax = r.xmin + 1.0;
  }
  if (!(r.height() > 0.0)) {
    r.ymax = r.ymin + 1.0;
  }
  return r;
}

PipelineOutput run_pipeline(const std::vector<Trajectory>& data,
                            const std::vector<Trajectory>& queries,
                            const PipelineConfig& config) {
  config.query.validate();
  for (const Trajectory& q : queries) {
    validate_trajectory(q);
  }
  PipelineOutput out;
  const auto t0 = Clock::now();

  std::vector<SegmentRef> pieces = prepare_data_pieces(data, config);
  IndexConfig icfg = config.index;
  if (config.auto_space_bounds) {
    icfg.space_bounds = fit_space_bounds(pieces);
  }
  Metrics build_metrics;
  StsIndex index = build_index(pieces, icfg, build_metrics);
  out.build_metrics = build_metrics.snapshot();
  out.index_stats = index.stats_text();
  out.stored_pieces = index.piece_count();
  out.index_height = index.max_tree_height();
  out.mean_leaf_side = index.mean_leaf_side();

  Metrics join_metrics;
  CandidateGroups groups = server_join(index, queries, config.query,
                                       join_metrics, config.threads);

  // Exact refinement on the clients, against the original trajectories.
  std::unordered_map<std::string, const Trajectory*> queries_by_id;
  for (const Trajectory& q : queries) {
    queries_by_id[q.local_id] = &q;
  }
  std::map<std::string, ClientStore> stores;
  for (const Trajectory& t : data) {
    stores.try_emplace(t.client_id, t.client_id)
        .first->second.register_trajectory(t);
  }
  std::vector<const ClientStore*> contacted;
  {
    std::string prev;
    for (const auto& [key, unused] : groups) {
      if (key.client_id != prev) {
        contacted.push_back(&stores.at(key.client_id));
        prev = key.client_id;
      }
    }
  }

  std::vector<std::vector<ClientStore::Verified>> verified(contacted.size());
  const int n = static_cast<int>(contacted.size());
#ifdef _OPENMP
  const int use_threads =
      config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(use_threads)
#endif
  for (int i = 0; i < n; ++i) {
    verified[i] =
        contacted[i]->verify_pairs(groups, config.query, queries_by_id);
  }

  for (std::size_t i = 0; i < contacted.size(); ++i) {
    for (const auto& v : verified[i]) {
      out.results.push_back({v.query_traj_id, contacted[i]->client_id(),
                             v.data_traj_id, v.cdds_s});
    }
  }
  std::sort(out.results.begin(), out.results.end());

  const JoinMetrics jm = join_metrics.snapshot();
  out.join_metrics = jm;
  out.join_metrics.wall_time_ms = ms_since(t0);
  out.mean_backtrack_distance =
      jm.backtrack_calls == 0
          ? 0.0
          : static_cast<double>(jm.backtrack_steps) /
                static_cast<double>(jm.backtrack_calls);
  return out;
}

std::vector<ResultRow> oracle_join(const std::vector<Trajectory>& data,
                                   const std::vector<Trajectory>& queries,
                                   double delta_d, double delta_t,
                                   int threads) {
  if (!(delta_d > 0.0)) {
    throw std::invalid_argument("oracle_join: delta_d must be > 0");
  }
  const std::int64_t total =
      static_cast<std::int64_t>(data.size()) *
      static_cast<std::int64_t>(queries.size());
  std::vector<ResultRow> rows;
#ifdef _OPENMP
  const int use_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(use_threads)
  {
    std::vector<ResultRow> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t k = 0; k < total; ++k) {
      const Trajectory& d = data[k / static_cast<std::int64_t>(queries.size())];
      const Trajectory& q = queries[k % static_cast<std::int64_t>(queries.size())];
      const double sim = cdds(d, q, delta_d);
      if (delta_t > 0.0 ? sim >= delta_t : sim > 0.0) {
        local.push_back({q.local_id, d.client_id, d.local_id, sim});
      }
    }
#pragma omp critical
    rows.insert(rows.end(), local.begin(), local.end());
  }
#else
  (void)threads;
  for (std::int64_t k = 0; k < total; ++k) {
    const Trajectory& d = data[k / static_cast<std::int64_t>(queries.size())];
    const Trajectory& q = queries[k % static_cast<std::int64_t>(queries.size())];
    const double sim = cdds(d, q, delta_d);
    if (delta_t > 0.0 ? sim >= delta_t : sim > 0.0) {
      rows.push_back({q.local_id, d.client_id, d.local_id, sim});
    }
  }
#endif
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace sts

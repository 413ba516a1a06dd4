// Command-line front door: synthetic data generation, index building,
// STS joins, the brute-force oracle, and a benchmark comparing the modes
// and the serial/parallel kernels.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sts/pipeline.hpp"
#include "sts/synthetic.hpp"
#include "sts/traj_io.hpp"

namespace {

using sts::JoinMode;

struct CommonOpts {
  std::string data_path;
  std::string queries_path;
  std::string out_path;
  std::string metrics_path;
  std::string mode = "backtrack";
  sts::PipelineConfig config;
  double leaf_interval_s = 1800.0;
  double bitmap_interval_s = 30.0;
};

void add_query_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--delta-d", o.config.query.delta_d,
                  "join distance threshold, meters");
  cmd->add_option("--delta-t", o.config.query.delta_t,
                  "join duration threshold, seconds");
  cmd->add_option("--theta-sp", o.config.query.theta_sp,
                  "simplification threshold, meters");
  cmd->add_option("--theta-ob", o.config.query.theta_ob,
                  "obfuscation bound, meters");
  cmd->add_option("--noise-b", o.config.noise_b,
                  "noise distribution bias (default theta_ob/3)");
  cmd->add_option("--mode", o.mode, "plain | backtrack | backtrack-bound");
  cmd->add_option("--btree-cap", o.config.index.btree_capacity,
                  "temporal node capacity");
  cmd->add_option("--quad-cap", o.config.index.quad_capacity,
                  "quadtree leaf endpoint capacity");
  cmd->add_option("--leaf-interval-s", o.leaf_interval_s,
                  "temporal leaf interval, seconds");
  cmd->add_option("--bitmap-interval-s", o.bitmap_interval_s,
                  "bitmap slot interval, seconds");
  cmd->add_option("--seed", o.config.seed, "root seed for all randomness");
  cmd->add_option("--threads", o.config.threads,
                  "worker threads (0 = all cores)");
}

JoinMode parse_mode(const std::string& s) {
  if (s == "plain") return JoinMode::kPlain;
  if (s == "backtrack") return JoinMode::kBacktrack;
  if (s == "backtrack-bound") return JoinMode::kBacktrackBound;
  throw CLI::ValidationError("--mode", "unknown mode '" + s + "'");
}

std::vector<sts::Trajectory> load_or_die(const std::string& path,
                                         const char* stage) {
  sts::LoadReport report = sts::load_trajectories(path);
  for (const std::string& w : report.warnings) {
    std::cerr << stage << ": " << w << "\n";
  }
  return std::move(report.trajectories);
}

void finish_config(CommonOpts& o) {
  o.config.query.mode = parse_mode(o.mode);
  o.config.index.leaf_interval_ms =
      static_cast<std::int64_t>(o.leaf_interval_s * 1000.0);
  o.config.index.bitmap_interval_ms =
      static_cast<std::int64_t>(o.bitmap_interval_s * 1000.0);
}

int run_gen(const sts::SyntheticSpec& spec, const std::string& out) {
  const auto trajs = sts::generate_synthetic(spec);
  sts::write_trajectories(out, trajs);
  std::cout << "gen: wrote " << trajs.size() << " trajectories to " << out
            << "\n";
  return 0;
}

int run_build(CommonOpts& o) {
  finish_config(o);
  const auto data = load_or_die(o.data_path, "build");
  std::vector<sts::SegmentRef> pieces =
      sts::prepare_data_pieces(data, o.config);
  sts::IndexConfig icfg = o.config.index;
  icfg.space_bounds = sts::fit_space_bounds(pieces);
  sts::Metrics metrics;
  sts::StsIndex index = sts::build_index(pieces, icfg, metrics);
  std::cout << index.stats_text();
  std::cout << "build_node_accesses=" << metrics.node_accesses() << "\n";
  return 0;
}

int run_join(CommonOpts& o) {
  finish_config(o);
  const auto data = load_or_die(o.data_path, "join");
  const auto queries = load_or_die(o.queries_path, "join");
  const sts::PipelineOutput out = sts::run_pipeline(data, queries, o.config);
  if (!o.out_path.empty()) {
    sts::write_results(o.out_path, out.results);
  }
  if (!o.metrics_path.empty()) {
    sts::write_metrics(
        o.metrics_path, out.join_metrics,
        {{"mode", sts::to_string(o.config.query.mode)},
         {"build_node_accesses",
          std::to_string(out.build_metrics.node_accesses)},
         {"stored_pieces", std::to_string(out.stored_pieces)},
         {"index_height", std::to_string(out.index_height)}});
  }
  std::cout << "join: " << out.results.size() << " couples, "
            << out.join_metrics.node_accesses << " node accesses, "
            << out.join_metrics.segment_pairs_sent << " pairs sent to "
            << out.join_metrics.clients_contacted << " clients\n";
  return 0;
}

int run_oracle(CommonOpts& o) {
  const auto data = load_or_die(o.data_path, "oracle");
  const auto queries = load_or_die(o.queries_path, "oracle");
  const auto rows =
      sts::oracle_join(data, queries, o.config.query.delta_d,
                       o.config.query.delta_t, o.config.threads);
  if (!o.out_path.empty()) {
    sts::write_results(o.out_path, rows);
  }
  std::cout << "oracle: " << rows.size() << " couples\n";
  return 0;
}

int run_bench(CommonOpts& o) {
  finish_config(o);
  const auto data = load_or_die(o.data_path, "bench");
  const auto queries = load_or_die(o.queries_path, "bench");
  using Clock = std::chrono::steady_clock;

  const auto t0 = Clock::now();
  const auto oracle_rows =
      sts::oracle_join(data, queries, o.config.query.delta_d,
                       o.config.query.delta_t, 1);
  const double oracle_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  std::printf("%-16s %12s %12s %10s %8s %8s %10s\n", "mode", "node_acc",
              "cand_pairs", "sent", "clients", "pruned", "wall_ms");
  std::printf("%-16s %12s %12s %10s %8s %8s %10.1f  (serial reference)\n",
              "oracle", "-", "-", "-", "-", "-", oracle_ms);

  const JoinMode modes[3] = {JoinMode::kPlain, JoinMode::kBacktrack,
                             JoinMode::kBacktrackBound};
  std::vector<sts::ResultRow> first_results;
  for (const JoinMode mode : modes) {
    sts::PipelineConfig cfg = o.config;
    cfg.query.mode = mode;
    for (const int threads : {1, cfg.threads}) {
      cfg.threads = threads;
      const sts::PipelineOutput out = sts::run_pipeline(data, queries, cfg);
      std::printf("%-16s %12llu %12llu %10llu %8llu %8llu %10.1f  (%s)\n",
                  sts::to_string(mode),
                  static_cast<unsigned long long>(out.join_metrics.node_accesses),
                  static_cast<unsigned long long>(out.join_metrics.candidate_pairs),
                  static_cast<unsigned long long>(out.join_metrics.segment_pairs_sent),
                  static_cast<unsigned long long>(out.join_metrics.clients_contacted),
                  static_cast<unsigned long long>(out.join_metrics.groups_pruned),
                  out.join_metrics.wall_time_ms,
                  threads == 1 ? "serial" : "parallel");
      if (first_results.empty()) {
        first_results = out.results;
      } else if (!std::equal(first_results.begin(), first_results.end(),
                             out.results.begin(), out.results.end(),
                             [](const sts::ResultRow& a, const sts::ResultRow& b) {
                               return a.client_id == b.client_id &&
                                      a.data_traj == b.data_traj &&
                                      a.query_traj == b.query_traj;
                             }) ||
                 first_results.size() != out.results.size()) {
        std::cerr << "bench: result sets diverge between runs\n";
        return 1;
      }
    }
  }
  std::printf("result couples: %zu (identical across all modes and thread "
              "counts; oracle agrees: %s)\n",
              first_results.size(),
              first_results.size() == oracle_rows.size() ? "yes" : "NO");
  return first_results.size() == oracle_rows.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-trajectory similarity join engine"};
  app.require_subcommand(1);

  CommonOpts opts;
  sts::SyntheticSpec spec;
  std::string gen_out = "trajectories.csv";

  CLI::App* gen = app.add_subcommand("gen", "generate synthetic trajectories");
  gen->add_option("--num-clients", spec.num_clients);
  gen->add_option("--trajs-per-client", spec.trajs_per_client);
  gen->add_option("--points", spec.points_per_traj);
  gen->add_option("--space-side", spec.space_side);
  gen->add_option("--horizon-s", spec.time_horizon_s);
  gen->add_option("--clusters", spec.cluster_centers);
  gen->add_option("--cluster-sigma", spec.cluster_sigma);
  gen->add_option("--speed-min", spec.speed_min);
  gen->add_option("--speed-max", spec.speed_max);
  gen->add_option("--interval-s", spec.sample_interval_s);
  gen->add_option("--seed", spec.seed);
  gen->add_option("--out", gen_out);

  CLI::App* build = app.add_subcommand("build", "build the index and dump stats");
  build->add_option("--data", opts.data_path)->required();
  add_query_flags(build, opts);

  CLI::App* join = app.add_subcommand("join", "run the full join pipeline");
  join->add_option("--data", opts.data_path)->required();
  join->add_option("--queries", opts.queries_path)->required();
  join->add_option("--out", opts.out_path);
  join->add_option("--metrics-out", opts.metrics_path);
  add_query_flags(join, opts);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force reference join");
  oracle->add_option("--data", opts.data_path)->required();
  oracle->add_option("--queries", opts.queries_path)->required();
  oracle->add_option("--out", opts.out_path);
  oracle->add_option("--delta-d", opts.config.query.delta_d);
  oracle->add_option("--delta-t", opts.config.query.delta_t);
  oracle->add_option("--threads", opts.config.threads);

  CLI::App* bench = app.add_subcommand(
      "bench", "compare modes and serial vs parallel kernels");
  bench->add_option("--data", opts.data_path)->required();
  bench->add_option("--queries", opts.queries_path)->required();
  add_query_flags(bench, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(spec, gen_out);
    if (build->parsed()) return run_build(opts);
    if (join->parsed()) return run_join(opts);
    if (oracle->parsed()) return run_oracle(opts);
    if (bench->parsed()) return run_bench(opts);
  } catch (const std::exception& e) {
    const char* stage = gen->parsed()      ? "gen"
                        : build->parsed()  ? "build"
                        : join->parsed()   ? "join"
                        : oracle->parsed() ? "oracle"
                                           : "bench";
    std::cerr << stage << ": error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

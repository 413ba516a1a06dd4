#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sts/geometry.hpp"
#include "sts/metrics.hpp"

namespace sts {

struct IndexConfig {
  int btree_capacity = 100;  // max entries per temporal node
  int quad_capacity = 4;     // max endpoints per quadtree leaf
  std::int64_t leaf_interval_ms = 1'800'000;
  std::int64_t bitmap_interval_ms = 30'000;
  Rect space_bounds{0.0, 0.0, 10'000.0, 10'000.0};
  int max_quad_depth = 20;

  int bitmap_slots() const {
    return static_cast<int>(leaf_interval_ms / bitmap_interval_ms);
  }
  void validate() const;  // throws std::invalid_argument
};

/// A stored (or query-side) segment piece whose span fits one temporal leaf
/// interval. Carries enough identity to group results by client and map a
/// simplified segment back to the original segment range [src_begin,
/// src_end) on the owning client.
struct SegmentRef {
  std::string client_id;
  std::string traj_id;
  int segment_index = 0;  // index within the (simplified) trajectory
  int src_begin = 0;
  int src_end = 0;
  SegmentMotion motion;   // span == this piece's span
  // Piece endpoint positions, kept explicitly: evaluating kx*t+bx at
  // epoch-scale timestamps can drift by rounding, while these stay inside
  // the original segment's box.
  double sx = 0.0, sy = 0.0;
  double ex = 0.0, ey = 0.0;
  Rect mbr;               // tight box of the piece endpoints
  std::uint64_t uid = 0;  // assigned at insertion, unique per piece
};

/// Builds a piece over the full extent of one segment.
SegmentRef make_segment_ref(std::string client_id, std::string traj_id,
                            int segment_index, const TrajPoint& a,
                            const TrajPoint& b);

/// Splits every segment of the trajectory at temporal leaf interval
/// boundaries. Piece endpoints are interpolated at the boundary; the motion
/// coefficients are carried over unchanged so concatenation reproduces the
/// original movement exactly. segment_index remembers the source segment.
std::vector<SegmentRef> split_to_leaf_intervals(const Trajectory& traj,
                                                const IndexConfig& config);

Rect segment_tight_mbr(const SegmentMotion& m);

/// Quadtree node. Children tile the parent exactly with the half-open
/// quadrant convention [min, mid) x [min, mid); the global max edges are
/// closed so every point of the space belongs to exactly one leaf.
class QuadNode {
 public:
  struct StoredEndpoint {
    double x;
    double y;
    std::uint32_t traj_key;
  };
  struct StoredSegment {
    SegmentRef ref;
    std::uint32_t traj_key;
    std::vector<std::uint64_t> bitmap;  // one bit per temporal slot
  };

  const Rect& mbr() const { return mbr_; }
  const QuadNode* parent() const { return parent_; }
  int depth() const { return depth_; }
  bool is_leaf() const { return !children_[0]; }
  const QuadNode* child(int i) const { return children_[i].get(); }
  const std::vector<StoredEndpoint>& endpoints() const { return endpoints_; }
  const std::vector<StoredSegment>& segments() const { return segments_; }

  /// Point containment under the split convention (half-open except at the
  /// closed global max edges).
  bool covers(double x, double y) const;

 private:
  friend class StsIndex;
  Rect mbr_;
  QuadNode* parent_ = nullptr;
  int depth_ = 0;
  bool closed_x_ = false;  // xmax is the global space edge
  bool closed_y_ = false;
  std::array<std::unique_ptr<QuadNode>, 4> children_;
  std::vector<StoredEndpoint> endpoints_;
  std::vector<StoredSegment> segments_;
};

/// One temporal leaf entry: a fixed half-open interval
/// [interval_start, interval_start + leaf_interval) and its quadtree.
struct TemporalEntry {
  TimestampMs interval_start = 0;
  std::unique_ptr<QuadNode> root;
};

/// Server-side STS index: a B-tree over fixed temporal leaf intervals whose
/// entries own quasi-quadtrees storing segment pieces plus temporal bitmaps.
/// Construction and updates need exclusive access; lookups and traversals
/// over a built index may run from many threads.
class StsIndex {
 public:
  explicit StsIndex(IndexConfig config);
  ~StsIndex();
  StsIndex(StsIndex&&) noexcept;
  StsIndex& operator=(StsIndex&&) noexcept;

  const IndexConfig& config() const { return config_; }

  /// Inserts one piece (span must fit one leaf interval). Throws
  /// std::invalid_argument when an endpoint leaves the space bounds or the
  /// span crosses an interval boundary.
  void insert(const SegmentRef& piece, Metrics& metrics);

  /// Removes every piece of the trajectory and any nodes left empty.
  /// Returns false when the trajectory was not present.
  bool erase_trajectory(const std::string& client_id,
                        const std::string& traj_id, Metrics& metrics);

  /// Temporal lookup: the unique entry whose interval contains t, or null.
  const TemporalEntry* lookup(TimestampMs t, Metrics& metrics) const;

  /// Leaf of the quadtree covering p; p is clamped to the root MBR first so
  /// pivots of expanded MBRs may exit the space.
  const QuadNode* find_node(const QuadNode* root, double x, double y,
                            Metrics& metrics) const;

  /// Lowest ancestor of node (possibly node itself) covering p, after
  /// clamping p to the space bounds. Also records the backtracking distance.
  const QuadNode* backtrack(const QuadNode* node, double x, double y,
                            Metrics& metrics) const;

  /// Two-point variant: lowest ancestor covering both clamped points. For
  /// opposite corners of a rectangle this is the lowest ancestor covering
  /// the whole rectangle's intersection with the space.
  const QuadNode* backtrack_covering(const QuadNode* node, double x1,
                                     double y1, double x2, double y2,
                                     Metrics& metrics) const;

  /// Segments of a leaf passing the bitmap filter for query_span and whose
  /// tight MBR overlaps query_mbr. A coarse filter: may return pieces whose
  /// exact span misses the query span.
  std::vector<const SegmentRef*> leaf_candidates(const TemporalEntry& entry,
                                                 const QuadNode& leaf,
                                                 const Rect& query_mbr,
                                                 const TimeInterval& query_span) const;

  /// Visits every stored piece copy (a piece attached to several leaves is
  /// visited once per leaf).
  void sweep(const std::function<void(const TemporalEntry&, const QuadNode&,
                                      const SegmentRef&)>& visit) const;

  std::vector<const TemporalEntry*> entries() const;

  std::uint64_t piece_count() const { return pieces_inserted_; }
  int max_tree_height() const;
  double mean_leaf_side() const;
  std::string stats_text() const;

  TimestampMs interval_start_of(TimestampMs t) const {
    return (t / config_.leaf_interval_ms) * config_.leaf_interval_ms;
  }

 private:
  struct BTreeNode;

  TemporalEntry* find_or_create_entry(TimestampMs start, Metrics& metrics);
  const TemporalEntry* btree_lookup(TimestampMs start, Metrics& metrics) const;
  void insert_endpoint(TemporalEntry& entry, double x, double y,
                       std::uint32_t traj_key, Metrics& metrics);
  void attach_segment(TemporalEntry& entry, const SegmentRef& piece,
                      std::uint32_t traj_key, Metrics& metrics);
  void split_leaf(QuadNode& leaf, Metrics& metrics);
  bool erase_below(QuadNode& node, std::uint32_t traj_key,
                   std::unordered_set<std::uint64_t>& removed_uids,
                   Metrics& metrics);
  std::vector<std::uint64_t> bitmap_row(const TemporalEntry& entry,
                                        const SegmentMotion& span) const;
  std::uint32_t intern_traj(const std::string& client_id,
                            const std::string& traj_id);

  IndexConfig config_;
  std::unique_ptr<BTreeNode> btree_root_;
  std::vector<std::unique_ptr<TemporalEntry>> entry_pool_;
  std::unordered_map<std::string, std::uint32_t> traj_key_index_;
  std::uint64_t pieces_inserted_ = 0;
  std::uint64_t next_uid_ = 1;
};

/// Builds an index over pre-split pieces.
StsIndex build_index(const std::vector<SegmentRef>& pieces,
                     const IndexConfig& config, Metrics& metrics);

}  // namespace sts

#include "sts/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sts {

void IndexConfig::validate() const {
  if (btree_capacity < 2 || quad_capacity < 2) {
    throw std::invalid_argument("IndexConfig: capacities must be >= 2");
  }
  if (leaf_interval_ms <= 0 || bitmap_interval_ms <= 0 ||
      leaf_interval_ms % bitmap_interval_ms != 0) {
    throw std::invalid_argument(
        "IndexConfig: leaf_interval must be a positive multiple of "
        "bitmap_interval");
  }
  if (!(space_bounds.width() > 0.0) || !(space_bounds.height() > 0.0)) {
    throw std::invalid_argument("IndexConfig: space_bounds must have area");
  }
  if (max_quad_depth < 1) {
    throw std::invalid_argument("IndexConfig: max_quad_depth must be >= 1");
  }
}

Rect segment_tight_mbr(const SegmentMotion& m) {
  const double x1 = m.x_at(static_cast<double>(m.t_start));
  const double y1 = m.y_at(static_cast<double>(m.t_start));
  const double x2 = m.x_at(static_cast<double>(m.t_end));
  const double y2 = m.y_at(static_cast<double>(m.t_end));
  return {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2),
          std::max(y1, y2)};
}

SegmentRef make_segment_ref(std::string client_id, std::string traj_id,
                            int segment_index, const TrajPoint& a,
                            const TrajPoint& b) {
  SegmentRef p;
  p.client_id = std::move(client_id);
  p.traj_id = std::move(traj_id);
  p.segment_index = segment_index;
  p.src_begin = segment_index;
  p.src_end = segment_index + 1;
  p.motion = motion_coeffs(a, b);
  p.sx = a.x;
  p.sy = a.y;
  p.ex = b.x;
  p.ey = b.y;
  p.mbr = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
           std::max(a.y, b.y)};
  return p;
}

std::vector<SegmentRef> split_to_leaf_intervals(const Trajectory& traj,
                                                const IndexConfig& config) {
  config.validate();
  const std::int64_t step = config.leaf_interval_ms;
  std::vector<SegmentRef> out;
  for (std::size_t j = 0; j + 1 < traj.points.size(); ++j) {
    const TrajPoint& a = traj.points[j];
    const TrajPoint& b = traj.points[j + 1];
    SegmentRef whole = make_segment_ref(traj.client_id, traj.local_id,
                                        static_cast<int>(j), a, b);
    TimestampMs lo = a.t;
    double cut_x = a.x;
    double cut_y = a.y;
    while (lo < b.t) {
      const TimestampMs boundary = (lo / step + 1) * step;
      const TimestampMs hi = std::min(boundary, b.t);
      SegmentRef piece = whole;  // same identity and motion coefficients
      piece.motion.t_start = lo;
      piece.motion.t_end = hi;
      piece.sx = cut_x;
      piece.sy = cut_y;
      if (hi == b.t) {
        piece.ex = b.x;
        piece.ey = b.y;
      } else {
        // Ratio interpolation stays within the segment's endpoint box (the
        // clamp mops up the last ulp), unlike evaluating kx*t + bx.
        const double r =
            static_cast<double>(hi - a.t) / static_cast<double>(b.t - a.t);
        piece.ex = std::clamp(a.x + r * (b.x - a.x), std::min(a.x, b.x),
                              std::max(a.x, b.x));
        piece.ey = std::clamp(a.y + r * (b.y - a.y), std::min(a.y, b.y),
                              std::max(a.y, b.y));
      }
      piece.mbr = {std::min(piece.sx, piece.ex), std::min(piece.sy, piece.ey),
                   std::max(piece.sx, piece.ex), std::max(piece.sy, piece.ey)};
      cut_x = piece.ex;
      cut_y = piece.ey;
      out.push_back(std::move(piece));
      lo = hi;
    }
  }
  return out;
}

bool QuadNode::covers(double x, double y) const {
  const bool x_ok =
      x >= mbr_.xmin && (x < mbr_.xmax || (closed_x_ && x == mbr_.xmax));
  const bool y_ok =
      y >= mbr_.ymin && (y < mbr_.ymax || (closed_y_ && y == mbr_.ymax));
  return x_ok && y_ok;
}

// ---------------------------------------------------------------------------
// Temporal B-tree. A B+-tree over interval start keys; leaves hold pointers
// to the temporal entries. Every node visited on the way down counts as one
// access.
// ---------------------------------------------------------------------------

struct StsIndex::BTreeNode {
  bool leaf = true;
  std::vector<TimestampMs> keys;
  std::vector<TemporalEntry*> values;                 // leaf only
  std::vector<std::unique_ptr<BTreeNode>> children;   // internal only

  int child_slot(TimestampMs key) const {
    // First child whose subtree may contain key.
    const auto it = std::upper_bound(keys.begin(), keys.end(), key);
    return static_cast<int>(it - keys.begin());
  }
};

StsIndex::StsIndex(IndexConfig config) : config_(std::move(config)) {
  config_.validate();
  btree_root_ = std::make_unique<BTreeNode>();
}

StsIndex::~StsIndex() = default;
StsIndex::StsIndex(StsIndex&&) noexcept = default;
StsIndex& StsIndex::operator=(StsIndex&&) noexcept = default;

const TemporalEntry* StsIndex::btree_lookup(TimestampMs start,
                                            Metrics& metrics) const {
  const BTreeNode* node = btree_root_.get();
  while (true) {
    metrics.add_node_access();
    if (node->leaf) {
      const auto it =
          std::lower_bound(node->keys.begin(), node->keys.end(), start);
      if (it != node->keys.end() && *it == start) {
        return node->values[it - node->keys.begin()];
      }
      return nullptr;
    }
    node = node->children[node->child_slot(start)].get();
  }
}

const TemporalEntry* StsIndex::lookup(TimestampMs t, Metrics& metrics) const {
  return btree_lookup(interval_start_of(t), metrics);
}

TemporalEntry* StsIndex::find_or_create_entry(TimestampMs start,
                                              Metrics& metrics) {
  // Descend, remembering the path for splits on the way back up.
  std::vector<BTreeNode*> path;
  BTreeNode* node = btree_root_.get();
  while (true) {
    metrics.add_node_access();
    path.push_back(node);
    if (node->leaf) {
      break;
    }
    node = node->children[node->child_slot(start)].get();
  }
  auto it = std::lower_bound(node->keys.begin(), node->keys.end(), start);
  if (it != node->keys.end() && *it == start) {
    return node->values[it - node->keys.begin()];
  }

  auto entry = std::make_unique<TemporalEntry>();
  entry->interval_start = start;
  entry->root = std::make_unique<QuadNode>();
  entry->root->mbr_ = config_.space_bounds;
  entry->root->closed_x_ = true;
  entry->root->closed_y_ = true;
  TemporalEntry* result = entry.get();
  entry_pool_.push_back(std::move(entry));

  const auto pos = it - node->keys.begin();
  node->keys.insert(node->keys.begin() + pos, start);
  node->values.insert(node->values.begin() + pos, result);

  // Classic splits up the path while a node overflows.
  const std::size_t cap = static_cast<std::size_t>(config_.btree_capacity);
  for (std::size_t level = path.size(); level-- > 0;) {
    BTreeNode* cur = path[level];
    if (cur->keys.size() <= cap) {
      break;
    }
    auto right = std::make_unique<BTreeNode>();
    right->leaf = cur->leaf;
    const std::size_t mid = cur->keys.size() / 2;
    TimestampMs separator;
    if (cur->leaf) {
      separator = cur->keys[mid];
      right->keys.assign(cur->keys.begin() + mid, cur->keys.end());
      right->values.assign(cur->values.begin() + mid, cur->values.end());
      cur->keys.resize(mid);
      cur->values.resize(mid);
    } else {
      separator = cur->keys[mid];
      right->keys.assign(cur->keys.begin() + mid + 1, cur->keys.end());
      for (std::size_t c = mid + 1; c < cur->children.size(); ++c) {
        right->children.push_back(std::move(cur->children[c]));
      }
      cur->keys.resize(mid);
      cur->children.resize(mid + 1);
    }
    metrics.add_node_access(2);  // rewrite left + write right
    if (level == 0) {
      auto new_root = std::make_unique<BTreeNode>();
      new_root->leaf = false;
      new_root->keys.push_back(separator);
      new_root->children.push_back(std::move(btree_root_));
      new_root->children.push_back(std::move(right));
      btree_root_ = std::move(new_root);
      metrics.add_node_access();
      break;
    }
    BTreeNode* parent = path[level - 1];
    const auto ppos = std::upper_bound(parent->keys.begin(),
                                       parent->keys.end(), separator) -
                      parent->keys.begin();
    parent->keys.insert(parent->keys.begin() + ppos, separator);
    parent->children.insert(parent->children.begin() + ppos + 1,
                            std::move(right));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Quadtree operations.
// ---------------------------------------------------------------------------

namespace {

int quadrant_of(const Rect& r, double x, double y) {
  const double midx = 0.5 * (r.xmin + r.xmax);
  const double midy = 0.5 * (r.ymin + r.ymax);
  return (x >= midx ? 1 : 0) + (y >= midy ? 2 : 0);
}

}  // namespace

const QuadNode* StsIndex::find_node(const QuadNode* root, double x, double y,
                                    Metrics& metrics) const {
  x = std::clamp(x, root->mbr().xmin, root->mbr().xmax);
  y = std::clamp(y, root->mbr().ymin, root->mbr().ymax);
  const QuadNode* node = root;
  while (true) {
    metrics.add_node_access();
    if (node->is_leaf()) {
      return node;
    }
    node = node->child(quadrant_of(node->mbr(), x, y));
  }
}

const QuadNode* StsIndex::backtrack(const QuadNode* node, double x, double y,
                                    Metrics& metrics) const {
  x = std::clamp(x, config_.space_bounds.xmin, config_.space_bounds.xmax);
  y = std::clamp(y, config_.space_bounds.ymin, config_.space_bounds.ymax);
  std::uint64_t steps = 0;
  const QuadNode* cur = node;
  metrics.add_node_access();
  while (!cur->covers(x, y) && cur->parent() != nullptr) {
    cur = cur->parent();
    metrics.add_node_access();
    ++steps;
  }
  metrics.add_backtrack(steps);
  return cur;
}

const QuadNode* StsIndex::backtrack_covering(const QuadNode* node, double x1,
                                             double y1, double x2, double y2,
                                             Metrics& metrics) const {
  const Rect& s = config_.space_bounds;
  x1 = std::clamp(x1, s.xmin, s.xmax);
  y1 = std::clamp(y1, s.ymin, s.ymax);
  x2 = std::clamp(x2, s.xmin, s.xmax);
  y2 = std::clamp(y2, s.ymin, s.ymax);
  std::uint64_t steps = 0;
  const QuadNode* cur = node;
  metrics.add_node_access();
  while (!(cur->covers(x1, y1) && cur->covers(x2, y2)) &&
         cur->parent() != nullptr) {
    cur = cur->parent();
    metrics.add_node_access();
    ++steps;
  }
  metrics.add_backtrack(steps);
  return cur;
}

void StsIndex::split_leaf(QuadNode& leaf, Metrics& metrics) {
  const Rect& r = leaf.mbr_;
  const double midx = 0.5 * (r.xmin + r.xmax);
  const double midy = 0.5 * (r.ymin + r.ymax);
  const Rect quadrants[4] = {
      {r.xmin, r.ymin, midx, midy},
      {midx, r.ymin, r.xmax, midy},
      {r.xmin, midy, midx, r.ymax},
      {midx, midy, r.xmax, r.ymax},
  };
  for (int i = 0; i < 4; ++i) {
    auto child = std::make_unique<QuadNode>();
    child->mbr_ = quadrants[i];
    child->parent_ = &leaf;
    child->depth_ = leaf.depth_ + 1;
    child->closed_x_ = (i % 2 == 1) && leaf.closed_x_;
    child->closed_y_ = (i / 2 == 1) && leaf.closed_y_;
    leaf.children_[i] = std::move(child);
    metrics.add_node_access();
  }
  metrics.add_node_access();  // rewrite the split node itself
  for (const auto& ep : leaf.endpoints_) {
    leaf.children_[quadrant_of(r, ep.x, ep.y)]->endpoints_.push_back(ep);
  }
  for (auto& seg : leaf.segments_) {
    for (int i = 0; i < 4; ++i) {
      if (leaf.children_[i]->mbr_.overlaps(seg.ref.mbr)) {
        leaf.children_[i]->segments_.push_back(seg);
      }
    }
  }
  leaf.endpoints_.clear();
  leaf.segments_.clear();
  for (int i = 0; i < 4; ++i) {
    QuadNode& child = *leaf.children_[i];
    if (child.endpoints_.size() >
            static_cast<std::size_t>(config_.quad_capacity) &&
        child.depth_ < config_.max_quad_depth) {
      split_leaf(child, metrics);
    }
  }
}

void StsIndex::insert_endpoint(TemporalEntry& entry, double x, double y,
                               std::uint32_t traj_key, Metrics& metrics) {
  QuadNode* node = entry.root.get();
  while (true) {
    metrics.add_node_access();
    if (node->is_leaf()) {
      break;
    }
    node = node->children_[quadrant_of(node->mbr_, x, y)].get();
  }
  node->endpoints_.push_back({x, y, traj_key});
  if (node->endpoints_.size() > static_cast<std::size_t>(config_.quad_capacity) &&
      node->depth_ < config_.max_quad_depth) {
    split_leaf(*node, metrics);
  }
}

std::vector<std::uint64_t> StsIndex::bitmap_row(
    const TemporalEntry& entry, const SegmentMotion& span) const {
  const int slots = config_.bitmap_slots();
  std::vector<std::uint64_t> row((slots + 63) / 64, 0);
  const std::int64_t rel_s = span.t_start - entry.interval_start;
  const std::int64_t rel_e = span.t_end - entry.interval_start;
  for (int k = 0; k < slots; ++k) {
    const std::int64_t slot_lo = static_cast<std::int64_t>(k) * config_.bitmap_interval_ms;
    const std::int64_t slot_hi = slot_lo + config_.bitmap_interval_ms;
    if (rel_e >= slot_lo && rel_s < slot_hi) {
      row[k / 64] |= (1ULL << (k % 64));
    }
  }
  return row;
}

void StsIndex::attach_segment(TemporalEntry& entry, const SegmentRef& piece,
                              std::uint32_t traj_key, Metrics& metrics) {
  std::vector<std::uint64_t> row = bitmap_row(entry, piece.motion);
  std::vector<QuadNode*> stack{entry.root.get()};
  while (!stack.empty()) {
    QuadNode* node = stack.back();
    stack.pop_back();
    metrics.add_node_access();
    if (node->is_leaf()) {
      node->segments_.push_back({piece, traj_key, row});
    } else {
      for (int i = 0; i < 4; ++i) {
        if (node->children_[i]->mbr_.overlaps(piece.mbr)) {
          stack.push_back(node->children_[i].get());
        }
      }
    }
  }
}

std::uint32_t StsIndex::intern_traj(const std::string& client_id,
                                    const std::string& traj_id) {
  const std::string composite = client_id + '\x1f' + traj_id;
  const auto [it, inserted] = traj_key_index_.try_emplace(
      composite, static_cast<std::uint32_t>(traj_key_index_.size()));
  return it->second;
}

void StsIndex::insert(const SegmentRef& piece, Metrics& metrics) {
  const TimestampMs start = interval_start_of(piece.motion.t_start);
  if (piece.motion.t_end > start + config_.leaf_interval_ms) {
    throw std::invalid_argument("StsIndex::insert: piece " + piece.client_id +
                                "/" + piece.traj_id + "#" +
                                std::to_string(piece.segment_index) +
                                " crosses a leaf interval boundary");
  }
  const double pts[2][2] = {{piece.sx, piece.sy}, {piece.ex, piece.ey}};
  for (const auto& p : pts) {
    if (!config_.space_bounds.contains(p[0], p[1])) {
      throw std::invalid_argument(
          "StsIndex::insert: endpoint of segment " + piece.client_id + "/" +
          piece.traj_id + "#" + std::to_string(piece.segment_index) +
          " lies outside the space bounds");
    }
  }
  const std::uint32_t traj_key = intern_traj(piece.client_id, piece.traj_id);
  TemporalEntry* entry = find_or_create_entry(start, metrics);
  SegmentRef stored = piece;
  stored.uid = next_uid_++;
  insert_endpoint(*entry, pts[0][0], pts[0][1], traj_key, metrics);
  insert_endpoint(*entry, pts[1][0], pts[1][1], traj_key, metrics);
  attach_segment(*entry, stored, traj_key, metrics);
  ++pieces_inserted_;
}

bool StsIndex::erase_below(QuadNode& node, std::uint32_t traj_key,
                           std::unordered_set<std::uint64_t>& removed_uids,
                           Metrics& metrics) {
  metrics.add_node_access();
  if (node.is_leaf()) {
    std::erase_if(node.endpoints_, [&](const QuadNode::StoredEndpoint& e) {
      return e.traj_key == traj_key;
    });
    std::erase_if(node.segments_, [&](const QuadNode::StoredSegment& s) {
      if (s.traj_key != traj_key) {
        return false;
      }
      removed_uids.insert(s.ref.uid);
      return true;
    });
    return node.endpoints_.empty() && node.segments_.empty();
  }
  bool all_empty = true;
  for (int i = 0; i < 4; ++i) {
    if (!erase_below(*node.children_[i], traj_key, removed_uids, metrics)) {
      all_empty = false;
    }
  }
  if (all_empty) {
    for (int i = 0; i < 4; ++i) {
      node.children_[i].reset();
    }
    metrics.add_node_access();  // rewrite the collapsed node
  }
  return all_empty;
}

bool StsIndex::erase_trajectory(const std::string& client_id,
                                const std::string& traj_id, Metrics& metrics) {
  const auto it = traj_key_index_.find(client_id + '\x1f' + traj_id);
  if (it == traj_key_index_.end()) {
    return false;
  }
  std::unordered_set<std::uint64_t> removed;
  for (auto& entry : entry_pool_) {
    erase_below(*entry->root, it->second, removed, metrics);
  }
  pieces_inserted_ -= removed.size();
  return !removed.empty();
}

std::vector<const SegmentRef*> StsIndex::leaf_candidates(
    const TemporalEntry& entry, const QuadNode& leaf, const Rect& query_mbr,
    const TimeInterval& query_span) const {
  const int slots = config_.bitmap_slots();
  std::vector<std::uint64_t> mask((slots + 63) / 64, 0);
  const double rel_s = query_span.start - static_cast<double>(entry.interval_start);
  const double rel_e = query_span.end - static_cast<double>(entry.interval_start);
  for (int k = 0; k < slots; ++k) {
    const double slot_lo = static_cast<double>(k) * config_.bitmap_interval_ms;
    const double slot_hi = slot_lo + config_.bitmap_interval_ms;
    if (rel_e >= slot_lo && rel_s < slot_hi) {
      mask[k / 64] |= (1ULL << (k % 64));
    }
  }
  std::vector<const SegmentRef*> out;
  for (const auto& seg : leaf.segments()) {
    bool hit = false;
    for (std::size_t w = 0; w < mask.size(); ++w) {
      if (seg.bitmap[w] & mask[w]) {
        hit = true;
        break;
      }
    }
    if (hit && seg.ref.mbr.overlaps(query_mbr)) {
      out.push_back(&seg.ref);
    }
  }
  return out;
}

void StsIndex::sweep(
    const std::function<void(const TemporalEntry&, const QuadNode&,
                             const SegmentRef&)>& visit) const {
  for (const auto* entry : entries()) {
    std::vector<const QuadNode*> stack{entry->root.get()};
    while (!stack.empty()) {
      const QuadNode* node = stack.back();
      stack.pop_back();
      if (node->is_leaf()) {
        for (const auto& seg : node->segments()) {
          visit(*entry, *node, seg.ref);
        }
      } else {
        for (int i = 3; i >= 0; --i) {
          stack.push_back(node->child(i));
        }
      }
    }
  }
}

std::vector<const TemporalEntry*> StsIndex::entries() const {
  std::vector<const TemporalEntry*> out;
  out.reserve(entry_pool_.size());
  for (const auto& e : entry_pool_) {
    out.push_back(e.get());
  }
  std::sort(out.begin(), out.end(),
            [](const TemporalEntry* a, const TemporalEntry* b) {
              return a->interval_start < b->interval_start;
            });
  return out;
}

int StsIndex::max_tree_height() const {
  int height = 0;
  for (const auto& entry : entry_pool_) {
    std::vector<const QuadNode*> stack{entry->root.get()};
    while (!stack.empty()) {
      const QuadNode* node = stack.back();
      stack.pop_back();
      if (node->is_leaf()) {
        height = std::max(height, node->depth());
      } else {
        for (int i = 0; i < 4; ++i) {
          stack.push_back(node->child(i));
        }
      }
    }
  }
  return height;
}

double StsIndex::mean_leaf_side() const {
  double sum = 0.0;
  std::uint64_t leaves = 0;
  for (const auto& entry : entry_pool_) {
    std::vector<const QuadNode*> stack{entry->root.get()};
    while (!stack.empty()) {
      const QuadNode* node = stack.back();
      stack.pop_back();
      if (node->is_leaf()) {
        sum += 0.5 * (node->mbr().width() + node->mbr().height());
        ++leaves;
      } else {
        for (int i = 0; i < 4; ++i) {
          stack.push_back(node->child(i));
        }
      }
    }
  }
  return leaves == 0 ? 0.0 : sum / static_cast<double>(leaves);
}

std::string StsIndex::stats_text() const {
  std::map<int, std::uint64_t> nodes_per_level;
  std::map<std::size_t, std::uint64_t> occupancy;
  int height = 0;
  std::uint64_t leaves = 0;
  for (const auto& entry : entry_pool_) {
    std::vector<const QuadNode*> stack{entry->root.get()};
    while (!stack.empty()) {
      const QuadNode* node = stack.back();
      stack.pop_back();
      ++nodes_per_level[node->depth()];
      if (node->is_leaf()) {
        ++leaves;
        ++occupancy[node->endpoints().size()];
        height = std::max(height, node->depth());
      } else {
        for (int i = 0; i < 4; ++i) {
          stack.push_back(node->child(i));
        }
      }
    }
  }
  std::ostringstream os;
  os << "temporal_entries=" << entry_pool_.size() << "\n";
  os << "stored_pieces=" << pieces_inserted_ << "\n";
  os << "height=" << height << "\n";
  os << "leaves=" << leaves << "\n";
  os << "mean_leaf_side_m=" << mean_leaf_side() << "\n";
  for (const auto& [level, count] : nodes_per_level) {
    os << "nodes_level_" << level << "=" << count << "\n";
  }
  for (const auto& [n, count] : occupancy) {
    os << "leaf_occupancy_" << n << "=" << count << "\n";
  }
  return os.str();
}

StsIndex build_index(const std::vector<SegmentRef>& pieces,
                     const IndexConfig& config, Metrics& metrics) {
  StsIndex index(config);
  for (const SegmentRef& piece : pieces) {
    index.insert(piece, metrics);
  }
  return index;
}

}  // namespace sts

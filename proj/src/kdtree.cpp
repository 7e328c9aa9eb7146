#include "acker/kdtree.hpp"

#include <algorithm>
#include <limits>

#include "acker/error.hpp"

namespace acker {

namespace {
constexpr size_t kLeafSize = 16;

// Lexicographic order on (dist2, index); the heap keeps the worst kept
// hit at the top.
inline bool hit_less(const KdHit& a, const KdHit& b) {
  if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
  return a.index < b.index;
}
}  // namespace

struct KdTree2::BestSet {
  size_t cap;
  std::vector<KdHit> heap;

  explicit BestSet(size_t cap_) : cap(cap_) { heap.reserve(cap_); }

  bool full() const { return heap.size() == cap; }
  double worst_dist2() const { return heap.front().dist2; }

  void offer(double dist2, uint32_t index) {
    const KdHit hit{index, dist2};
    if (heap.size() < cap) {
      heap.push_back(hit);
      std::push_heap(heap.begin(), heap.end(), hit_less);
      return;
    }
    if (hit_less(hit, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), hit_less);
      heap.back() = hit;
      std::push_heap(heap.begin(), heap.end(), hit_less);
    }
  }
};

KdTree2::KdTree2(std::vector<std::array<double, 2>> points)
    : points_(std::move(points)) {
  if (points_.empty()) return;
  order_.resize(points_.size());
  for (uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, static_cast<uint32_t>(points_.size()));
}

uint32_t KdTree2::build(uint32_t begin, uint32_t end) {
  const uint32_t id = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back({});
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  double lo[2] = {std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
  double hi[2] = {-std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (uint32_t i = begin; i < end; ++i) {
    const auto& p = points_[order_[i]];
    for (int a = 0; a < 2; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  const uint8_t axis = (hi[0] - lo[0] >= hi[1] - lo[1]) ? 0 : 1;

  const uint32_t mid = begin + (end - begin) / 2;
  // Total order (coordinate, index) makes the partition deterministic
  // even when coordinates repeat.
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](uint32_t a, uint32_t b) {
                     const double ca = points_[a][axis];
                     const double cb = points_[b][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });
  const double split = points_[order_[mid]][axis];

  const uint32_t left = build(begin, mid);
  const uint32_t right = build(mid, end);
  Node& node = nodes_[id];
  node.split = split;
  node.left = left;
  node.right = right;
  node.axis = axis;
  return id;
}

void KdTree2::search(uint32_t node_id, const std::array<double, 2>& query,
                     std::optional<uint32_t> exclude, BestSet& best) const {
  const Node& node = nodes_[node_id];
  if (node.left == kNil) {
    for (uint32_t i = node.begin; i < node.end; ++i) {
      const uint32_t p = order_[i];
      if (exclude && *exclude == p) continue;
      const double dx = query[0] - points_[p][0];
      const double dy = query[1] - points_[p][1];
      best.offer(dx * dx + dy * dy, p);
    }
    return;
  }

  const double diff = query[node.axis] - node.split;
  const uint32_t near = diff < 0.0 ? node.left : node.right;
  const uint32_t far = diff < 0.0 ? node.right : node.left;
  search(near, query, exclude, best);
  // The far side must also be visited on exact distance ties: it may
  // hold an equal-distance point with a smaller index.
  if (!best.full() || diff * diff <= best.worst_dist2())
    search(far, query, exclude, best);
}

std::vector<KdHit> KdTree2::nearest(const std::array<double, 2>& query,
                                    size_t count,
                                    std::optional<uint32_t> exclude) const {
  const size_t available = points_.size() - (exclude ? 1 : 0);
  if (count < 1 || count > available)
    throw ConfigError("nearest: count " + std::to_string(count) +
                      " outside [1, " + std::to_string(available) + "]");
  if (exclude && *exclude >= points_.size())
    throw ConfigError("nearest: exclude index out of range");

  BestSet best(count);
  search(root_, query, exclude, best);
  std::vector<KdHit> out = std::move(best.heap);
  std::sort(out.begin(), out.end(), hit_less);
  return out;
}

}  // namespace acker

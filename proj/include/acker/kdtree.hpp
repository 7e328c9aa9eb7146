#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace acker {

struct KdHit {
  uint32_t index;
  double dist2;
};

// Static 2-d tree over a fixed point set with bucketed leaves and median
// splits on the wider axis. Query results are ordered by the pair
// (squared distance, point index), which makes every answer, including
// ties, reproducible and equal to an exhaustive scan under the same key.
class KdTree2 {
 public:
  KdTree2() = default;
  explicit KdTree2(std::vector<std::array<double, 2>> points);

  size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // The `count` best hits by (dist2, index); `exclude` is skipped when
  // set. Requires 1 <= count <= size() - (exclude ? 1 : 0).
  std::vector<KdHit> nearest(const std::array<double, 2>& query, size_t count,
                             std::optional<uint32_t> exclude = std::nullopt) const;

 private:
  struct Node {
    double split = 0.0;
    uint32_t left = kNil;
    uint32_t right = kNil;
    uint32_t begin = 0;
    uint32_t end = 0;
    uint8_t axis = 0;
  };
  static constexpr uint32_t kNil = 0xffffffffu;

  uint32_t build(uint32_t begin, uint32_t end);

  struct BestSet;
  void search(uint32_t node_id, const std::array<double, 2>& query,
              std::optional<uint32_t> exclude, BestSet& best) const;

  std::vector<std::array<double, 2>> points_;
  std::vector<uint32_t> order_;
  std::vector<Node> nodes_;
  uint32_t root_ = kNil;
};

}  // namespace acker

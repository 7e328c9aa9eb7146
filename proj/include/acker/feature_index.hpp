#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acker/features.hpp"
#include "acker/knn.hpp"

namespace acker {

// Strictly increasing candidate k values, all >= 1.
class KRange {
 public:
  KRange() = default;
  explicit KRange(std::vector<uint32_t> values);

  // {1, 2, ..., k_max}
  static KRange contiguous(uint32_t k_max);
  // Accepts "a..b" (inclusive) or a comma list "1,5,25".
  static KRange parse(std::string_view text);

  const std::vector<uint32_t>& values() const { return values_; }
  uint32_t max() const;
  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::optional<size_t> position_of(uint32_t k) const;
  std::string to_string() const;
  bool operator==(const KRange& other) const = default;

 private:
  std::vector<uint32_t> values_;
};

// Leave-one-out correctness of standard kNN, one cell per
// (training point, position of k in the range).
class CorrectnessTable {
 public:
  CorrectnessTable() = default;
  CorrectnessTable(size_t points, size_t slots)
      : points_(points), slots_(slots), bits_(points * slots, 0) {}

  bool at(size_t point, size_t slot) const { return bits_[point * slots_ + slot] != 0; }
  void set(size_t point, size_t slot, bool v) { bits_[point * slots_ + slot] = v ? 1 : 0; }
  size_t points() const { return points_; }
  size_t slots() const { return slots_; }
  const std::vector<uint8_t>& raw() const { return bits_; }
  bool operator==(const CorrectnessTable& other) const = default;

 private:
  size_t points_ = 0;
  size_t slots_ = 0;
  std::vector<uint8_t> bits_;
};

// Precomputed k-environment features of every training point for every
// candidate k, the search structures to find similar points quickly, and
// the leave-one-out correctness table. Built once per training set and
// reused by every query.
//
// Feature values of training points are computed with the point itself
// excluded from its neighbor search (leave-one-out), matching how the
// correctness table is built. 1-D features are indexed with a sorted
// array, 2-D features with a kd-tree; LatLon stores one slot shared by
// every k since the feature does not depend on k.
class FeatureIndexSet {
 public:
  FeatureIndexSet() = default;

  static FeatureIndexSet build(const TrainingSet& train, FeatureKind kind,
                               KRange range, unsigned threads = 1);

  FeatureKind kind() const { return kind_; }
  const KRange& range() const { return range_; }
  size_t point_count() const { return points_; }
  const CorrectnessTable& table() const { return table_; }

  // Position of k within the range; error when k is not a member.
  size_t range_position(uint32_t k) const;

  bool correct_at(uint32_t point, size_t range_pos) const {
    return table_.at(point, range_pos);
  }

  // Stored (leave-one-out) feature value of a training point at k.
  FeatureValue value_of(uint32_t point, uint32_t k) const;

  // The l training points most similar to `query` in the k-environment
  // feature space, ordered by (feature distance, point index). Equals an
  // exhaustive similarity scan with the same tie rule.
  std::vector<uint32_t> most_similar(uint32_t k, const FeatureValue& query,
                                     size_t l) const;

  // Versioned binary snapshot. Search structures are rebuilt on load,
  // which is deterministic, so a loaded set answers identically.
  void save(std::ostream& out) const;
  static FeatureIndexSet load(std::istream& in);
  void save_file(const std::string& path) const;
  static FeatureIndexSet load_file(const std::string& path);

 private:
  struct Slot {
    std::vector<double> comp0;     // per point
    std::vector<double> comp1;     // per point, 2-D kinds only
    std::vector<uint32_t> sorted;  // 1-D kinds: point ids by (value, id)
    KdTree2 tree;                  // 2-D kinds
  };

  size_t value_slot(uint32_t k) const;
  void build_slot_structures(unsigned threads);

  FeatureKind kind_ = FeatureKind::MaxDist;
  KRange range_;
  size_t points_ = 0;
  CorrectnessTable table_;
  std::vector<Slot> slots_;
};

}  // namespace acker

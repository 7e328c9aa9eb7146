#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acker/spatial.hpp"

namespace acker {

struct VoteResult {
  ClassId predicted = 0;
  std::vector<uint32_t> counts;  // per class id, sums to k
  bool tie = false;              // two or more classes share the max count
};

// Incremental majority vote over neighbors fed in rank order (nearest
// first). Ties at the max count go to the class whose first member is
// nearest; a further tie (unreachable, ranks are unique) goes to the
// smaller class id.
class VoteAccumulator {
 public:
  explicit VoteAccumulator(size_t class_count)
      : counts_(class_count, 0), first_rank_(class_count, UINT32_MAX) {}

  void add(ClassId c) {
    if (first_rank_[c] == UINT32_MAX) first_rank_[c] = rank_;
    ++rank_;
    const uint32_t n = ++counts_[c];
    if (n > max_count_) {
      max_count_ = n;
      winner_ = c;
      classes_at_max_ = 1;
    } else if (n == max_count_) {
      ++classes_at_max_;
      if (first_rank_[c] < first_rank_[winner_] ||
          (first_rank_[c] == first_rank_[winner_] && c < winner_)) {
        winner_ = c;
      }
    }
  }

  ClassId winner() const { return winner_; }
  bool tie() const { return classes_at_max_ >= 2; }
  const std::vector<uint32_t>& counts() const { return counts_; }

  void reset() {
    std::fill(counts_.begin(), counts_.end(), 0u);
    std::fill(first_rank_.begin(), first_rank_.end(), UINT32_MAX);
    rank_ = max_count_ = classes_at_max_ = 0;
    winner_ = 0;
  }

 private:
  std::vector<uint32_t> counts_;
  std::vector<uint32_t> first_rank_;
  uint32_t rank_ = 0;
  uint32_t max_count_ = 0;
  uint32_t classes_at_max_ = 0;
  ClassId winner_ = 0;
};

// Standard kNN majority vote for `p` against the training set.
// Requires 1 <= k <= train.size() - (exclude ? 1 : 0).
VoteResult knn_classify(const TrainingSet& train, const GeoPoint& p, size_t k,
                        std::optional<uint32_t> exclude = std::nullopt);

// Fraction of positions where prediction equals truth. Sequences must
// have equal, non-zero length.
double accuracy(std::span<const ClassId> predictions,
                std::span<const ClassId> truths);

}  // namespace acker

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "acker/feature_index.hpp"

namespace acker {

struct AckerConfig {
  FeatureKind kind = FeatureKind::MaxDist;
  KRange range;
  uint32_t l = 1;
};

struct Prediction {
  ClassId predicted = 0;
  uint32_t chosen_k = 0;
  double expected_accuracy = 0.0;
  // One (k, score) entry per candidate, filled only when requested.
  std::vector<std::pair<uint32_t, double>> per_k_scores;
};

// Fraction of the l most structurally similar training points that
// standard kNN classifies correctly at this k (leave-one-out). Always an
// exact multiple of 1/l. `k` must be a member of the index's range; a
// query that happens to coincide with a training point is not excluded.
double expected_accuracy(const TrainingSet& train, const FeatureIndexSet& fidx,
                         const GeoPoint& p, uint32_t k, uint32_t l);

// Per-point adaptive kNN: picks the candidate k with the highest
// expected accuracy (first winner on ties, i.e. the smallest such k),
// then classifies with standard kNN at that k. config.range must be a
// subset of the index's range and config.kind must match the index.
Prediction acker_classify(const TrainingSet& train, const FeatureIndexSet& fidx,
                          const GeoPoint& p, const AckerConfig& config,
                          bool keep_scores = false);

// Batch variant; chunks may run concurrently, output order and content
// are independent of the thread count.
std::vector<Prediction> acker_classify_batch(
    const TrainingSet& train, const FeatureIndexSet& fidx,
    std::span<const GeoPoint> points, const AckerConfig& config,
    unsigned threads = 1, bool keep_scores = false);

}  // namespace acker

#pragma once

#include <optional>
#include <vector>

#include "acker/geo.hpp"
#include "acker/kdtree.hpp"

namespace acker {

struct Neighbor {
  uint32_t index;   // point index in the owning dataset
  double distance;  // Euclidean distance in degrees
};

// Ascending by distance; exact distance ties ascend by point index.
// The first k entries of a (k+1)-nearest answer equal the k-nearest
// answer for the same query (prefix property).
using NeighborList = std::vector<Neighbor>;

// Exact k-nearest-neighbor search over a dataset's coordinates.
class SpatialIndex {
 public:
  explicit SpatialIndex(const Dataset& dataset);

  size_t size() const { return tree_.size(); }

  // The k nearest points to `query`; `exclude` is skipped when set.
  // Requires 1 <= k <= size() - (exclude ? 1 : 0). With `clamp` set, a
  // larger k is reduced to the number of available points instead.
  NeighborList k_nearest(const GeoPoint& query, size_t k,
                         std::optional<uint32_t> exclude = std::nullopt,
                         bool clamp = false) const;

 private:
  KdTree2 tree_;
};

// An immutable training dataset together with its spatial index.
class TrainingSet {
 public:
  explicit TrainingSet(Dataset dataset)
      : dataset_(std::move(dataset)), spatial_(dataset_) {}

  const Dataset& dataset() const { return dataset_; }
  const SpatialIndex& spatial() const { return spatial_; }
  size_t size() const { return dataset_.size(); }

 private:
  Dataset dataset_;
  SpatialIndex spatial_;
};

}  // namespace acker

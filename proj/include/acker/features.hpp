#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "acker/spatial.hpp"

namespace acker {

// Feature functions characterizing a point's k-environment:
//   AvgDist     mean distance to the k nearest neighbors
//   MaxDist     distance to the k-th nearest neighbor
//   MaxAvgComb  the pair (max_dist, avg_dist), in that order
//   LatLon      the pair (lat, lon) of the point itself, k plays no role
enum class FeatureKind { AvgDist, MaxDist, MaxAvgComb, LatLon };

constexpr int feature_dimensionality(FeatureKind kind) {
  return (kind == FeatureKind::AvgDist || kind == FeatureKind::MaxDist) ? 1 : 2;
}

constexpr bool feature_k_dependent(FeatureKind kind) {
  return kind != FeatureKind::LatLon;
}

std::string_view feature_name(FeatureKind kind);
std::optional<FeatureKind> feature_from_name(std::string_view name);

struct FeatureValue {
  std::array<double, 2> components{0.0, 0.0};
  int dim = 1;
};

// f(p, k) computed against the training set; `exclude` applies to the
// neighbor search (used for leave-one-out values of training points).
// Requires 1 <= k <= train.size() - (exclude ? 1 : 0) except for LatLon,
// where k is ignored entirely.
FeatureValue feature_value(FeatureKind kind, const TrainingSet& train,
                           const GeoPoint& p, size_t k,
                           std::optional<uint32_t> exclude = std::nullopt);

// Same, from an already fetched neighbor list (its first k entries).
FeatureValue feature_from_neighbors(FeatureKind kind, const GeoPoint& p,
                                    const NeighborList& neighbors, size_t k);

// Negated Euclidean distance between two feature vectors: 0 for
// identical values, more negative the farther apart. Dimensions must
// match.
double similarity(const FeatureValue& a, const FeatureValue& b);

// Squared feature-space distance, the canonical similarity ordering key
// (smaller key = more similar). Ties break by ascending point index.
double similarity_key(const FeatureValue& a, const FeatureValue& b);

}  // namespace acker

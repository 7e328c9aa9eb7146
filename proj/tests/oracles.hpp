#pragma once

// Brute-force reference implementations used to cross-check the library.
// They share the library's canonical arithmetic (squared distances,
// left-to-right rank-order sums) so agreement is exact, but take a
// structurally different route: full sorts and exhaustive scans instead
// of trees, buckets and precomputed tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "acker/features.hpp"
#include "acker/geo.hpp"
#include "acker/spatial.hpp"

namespace oracle {

// k nearest by (squared distance, index): sort everything, take k.
inline acker::NeighborList knn_scan(const acker::Dataset& ds,
                                    const acker::GeoPoint& q, size_t k,
                                    std::optional<uint32_t> exclude) {
  std::vector<std::pair<double, uint32_t>> keyed;
  keyed.reserve(ds.size());
  for (uint32_t i = 0; i < ds.size(); ++i) {
    if (exclude && *exclude == i) continue;
    keyed.emplace_back(acker::distance_squared(q, ds[i].point), i);
  }
  std::sort(keyed.begin(), keyed.end());
  acker::NeighborList out;
  out.reserve(k);
  for (size_t i = 0; i < k && i < keyed.size(); ++i)
    out.push_back({keyed[i].second, std::sqrt(keyed[i].first)});
  return out;
}

// Majority vote over neighbors in rank order. Winner has the largest
// count; count ties go to the class whose first member appears earliest,
// then to the smaller class id.
inline acker::ClassId vote_scan(const acker::Dataset& ds,
                                const acker::NeighborList& neighbors) {
  const size_t classes = ds.labels().size();
  std::vector<uint32_t> count(classes, 0);
  std::vector<uint32_t> first(classes, UINT32_MAX);
  for (size_t rank = 0; rank < neighbors.size(); ++rank) {
    const acker::ClassId c = ds[neighbors[rank].index].label;
    if (first[c] == UINT32_MAX) first[c] = static_cast<uint32_t>(rank);
    ++count[c];
  }
  acker::ClassId best = 0;
  bool have = false;
  for (acker::ClassId c = 0; c < classes; ++c) {
    if (count[c] == 0) continue;
    if (!have || count[c] > count[best] ||
        (count[c] == count[best] && first[c] < first[best])) {
      best = c;
      have = true;
    }
  }
  return best;
}

inline acker::ClassId knn_classify_scan(const acker::Dataset& ds,
                                        const acker::GeoPoint& q, size_t k,
                                        std::optional<uint32_t> exclude) {
  return vote_scan(ds, knn_scan(ds, q, k, exclude));
}

// Feature of a point's k-environment from a scan-built neighbor list,
// summed left to right in rank order like the library does.
inline acker::FeatureValue feature_scan(acker::FeatureKind kind,
                                        const acker::Dataset& ds,
                                        const acker::GeoPoint& p, size_t k,
                                        std::optional<uint32_t> exclude) {
  acker::FeatureValue out;
  out.dim = acker::feature_dimensionality(kind);
  if (kind == acker::FeatureKind::LatLon) {
    out.components = {p.lat, p.lon};
    return out;
  }
  const acker::NeighborList neighbors = knn_scan(ds, p, k, exclude);
  double sum = 0.0;
  for (size_t i = 0; i < k; ++i) sum += neighbors[i].distance;
  const double avg = sum / static_cast<double>(k);
  const double max = neighbors[k - 1].distance;
  switch (kind) {
    case acker::FeatureKind::AvgDist: out.components = {avg, 0.0}; break;
    case acker::FeatureKind::MaxDist: out.components = {max, 0.0}; break;
    case acker::FeatureKind::MaxAvgComb: out.components = {max, avg}; break;
    case acker::FeatureKind::LatLon: break;
  }
  return out;
}

inline double feature_key(const acker::FeatureValue& a,
                          const acker::FeatureValue& b) {
  const double d0 = a.components[0] - b.components[0];
  if (a.dim == 1) return d0 * d0;
  const double d1 = a.components[1] - b.components[1];
  return d0 * d0 + d1 * d1;
}

// The l points whose leave-one-out k-environment features are most
// similar to `query`, by exhaustive (key, index) sort.
inline std::vector<uint32_t> most_similar_scan(const acker::Dataset& ds,
                                               acker::FeatureKind kind,
                                               const acker::FeatureValue& query,
                                               size_t k, size_t l) {
  std::vector<std::pair<double, uint32_t>> keyed;
  keyed.reserve(ds.size());
  for (uint32_t i = 0; i < ds.size(); ++i) {
    const acker::FeatureValue f = feature_scan(kind, ds, ds[i].point, k, i);
    keyed.emplace_back(feature_key(query, f), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<uint32_t> out;
  out.reserve(l);
  for (size_t i = 0; i < l && i < keyed.size(); ++i)
    out.push_back(keyed[i].second);
  return out;
}

// End-to-end expected accuracy without any precomputed structure: find
// the l most similar training points exhaustively, reclassify each one
// leave-one-out at k, count hits.
inline double expected_accuracy_scan(const acker::Dataset& ds,
                                     acker::FeatureKind kind,
                                     const acker::GeoPoint& p, uint32_t k,
                                     uint32_t l) {
  const acker::FeatureValue query =
      feature_scan(kind, ds, p, k, std::nullopt);
  const std::vector<uint32_t> similar =
      most_similar_scan(ds, kind, query, k, l);
  size_t correct = 0;
  for (uint32_t i : similar) {
    const acker::ClassId pred = knn_classify_scan(ds, ds[i].point, k, i);
    correct += (pred == ds[i].label) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(l);
}

// ROC AUC by direct pairwise counting: a correct/incorrect pair scores 1
// when the correct side ranks higher, 0.5 on a tie. Counts stay integral
// (plus halves), so the quotient matches rank-based computation exactly.
inline std::optional<double> roc_auc_pairwise(std::span<const double> scores,
                                              std::span<const uint8_t> correct) {
  double wins = 0.0;
  size_t pos = 0, neg = 0;
  for (size_t i = 0; i < scores.size(); ++i) (correct[i] ? pos : neg) += 1;
  if (pos == 0 || neg == 0) return std::nullopt;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!correct[i]) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (correct[j]) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

// Two-pass Pearson correlation in extended precision.
inline std::optional<double> pearson_two_pass(std::span<const double> scores,
                                              std::span<const uint8_t> correct) {
  const size_t n = scores.size();
  long double mx = 0.0L, my = 0.0L;
  for (size_t i = 0; i < n; ++i) {
    mx += scores[i];
    my += correct[i];
  }
  mx /= static_cast<long double>(n);
  my /= static_cast<long double>(n);
  long double sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
  for (size_t i = 0; i < n; ++i) {
    const long double dx = scores[i] - mx;
    const long double dy = static_cast<long double>(correct[i]) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0L || syy == 0.0L) return std::nullopt;
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace oracle

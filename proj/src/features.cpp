#include "acker/features.hpp"

#include <cmath>

#include "acker/error.hpp"

namespace acker {

std::string_view feature_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::AvgDist: return "avg_dist";
    case FeatureKind::MaxDist: return "max_dist";
    case FeatureKind::MaxAvgComb: return "max_avg_comb";
    case FeatureKind::LatLon: return "lat_lon";
  }
  throw ConfigError("unknown feature kind");
}

std::optional<FeatureKind> feature_from_name(std::string_view name) {
  if (name == "avg_dist") return FeatureKind::AvgDist;
  if (name == "max_dist") return FeatureKind::MaxDist;
  if (name == "max_avg_comb") return FeatureKind::MaxAvgComb;
  if (name == "lat_lon") return FeatureKind::LatLon;
  return std::nullopt;
}

FeatureValue feature_from_neighbors(FeatureKind kind, const GeoPoint& p,
                                    const NeighborList& neighbors, size_t k) {
  FeatureValue out;
  out.dim = feature_dimensionality(kind);
  if (kind == FeatureKind::LatLon) {
    out.components = {p.lat, p.lon};
    return out;
  }
  if (k < 1 || k > neighbors.size())
    throw ConfigError("feature_from_neighbors: k=" + std::to_string(k) +
                      " outside [1, " + std::to_string(neighbors.size()) + "]");
  // Left-to-right accumulation in rank order; every other computation of
  // the same feature must sum in this order so values match bit for bit.
  double sum = 0.0;
  for (size_t i = 0; i < k; ++i) sum += neighbors[i].distance;
  const double avg = sum / static_cast<double>(k);
  const double max = neighbors[k - 1].distance;
  switch (kind) {
    case FeatureKind::AvgDist: out.components = {avg, 0.0}; break;
    case FeatureKind::MaxDist: out.components = {max, 0.0}; break;
    case FeatureKind::MaxAvgComb: out.components = {max, avg}; break;
    case FeatureKind::LatLon: break;  // handled above
  }
  return out;
}

FeatureValue feature_value(FeatureKind kind, const TrainingSet& train,
                           const GeoPoint& p, size_t k,
                           std::optional<uint32_t> exclude) {
  if (kind == FeatureKind::LatLon)
    return feature_from_neighbors(kind, p, {}, 0);
  const NeighborList neighbors = train.spatial().k_nearest(p, k, exclude);
  return feature_from_neighbors(kind, p, neighbors, k);
}

double similarity_key(const FeatureValue& a, const FeatureValue& b) {
  if (a.dim != b.dim)
    throw ConfigError("similarity: feature dimensions differ");
  const double d0 = a.components[0] - b.components[0];
  if (a.dim == 1) return d0 * d0;
  const double d1 = a.components[1] - b.components[1];
  return d0 * d0 + d1 * d1;
}

double similarity(const FeatureValue& a, const FeatureValue& b) {
  return -std::sqrt(similarity_key(a, b));
}

}  // namespace acker

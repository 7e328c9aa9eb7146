#include "acker/spatial.hpp"

#include <cmath>

#include "acker/error.hpp"

namespace acker {

namespace {

std::vector<std::array<double, 2>> coordinates(const Dataset& dataset) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(dataset.size());
  for (const auto& lp : dataset.points()) pts.push_back({lp.point.lon, lp.point.lat});
  return pts;
}

}  // namespace

SpatialIndex::SpatialIndex(const Dataset& dataset) : tree_(coordinates(dataset)) {
  if (dataset.empty())
    throw ConfigError("spatial index requires a non-empty dataset");
}

NeighborList SpatialIndex::k_nearest(const GeoPoint& query, size_t k,
                                     std::optional<uint32_t> exclude,
                                     bool clamp) const {
  const size_t available = size() - (exclude ? 1 : 0);
  if (clamp && k > available) k = available;
  if (k < 1 || k > available)
    throw ConfigError("k_nearest: k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(available) + "]");

  const auto hits = tree_.nearest({query.lon, query.lat}, k, exclude);
  NeighborList out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back({h.index, std::sqrt(h.dist2)});
  return out;
}

}  // namespace acker

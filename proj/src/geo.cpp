#include "acker/geo.hpp"

#include <cmath>

namespace acker {

bool point_in_bounds(const GeoPoint& p) {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= kLonMin &&
         p.lon <= kLonMax && p.lat >= kLatMin && p.lat <= kLatMax;
}

double distance_squared(const GeoPoint& a, const GeoPoint& b) {
  const double dx = a.lon - b.lon;
  const double dy = a.lat - b.lat;
  return dx * dx + dy * dy;
}

double distance(const GeoPoint& a, const GeoPoint& b) {
  return std::sqrt(distance_squared(a, b));
}

ClassId LabelDictionary::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const ClassId id = static_cast<ClassId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<ClassId> LabelDictionary::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& LabelDictionary::name(ClassId id) const {
  if (id >= names_.size())
    throw ConfigError("unknown class id " + std::to_string(id));
  return names_[id];
}

namespace {

void check_bounds(const GeoPoint& p) {
  if (!point_in_bounds(p)) {
    throw DataError("coordinate out of range: lon=" + std::to_string(p.lon) +
                    " lat=" + std::to_string(p.lat) +
                    " (expected lon in [-180, 180], lat in [-90, 90])");
  }
}

}  // namespace

void Dataset::add(const GeoPoint& p, std::string_view label_name) {
  check_bounds(p);
  points_.push_back({p, labels_.intern(label_name)});
}

void Dataset::add(const GeoPoint& p, ClassId label) {
  check_bounds(p);
  if (label >= labels_.size())
    throw ConfigError("label id " + std::to_string(label) +
                      " not present in the dictionary");
  points_.push_back({p, label});
}

Dataset Dataset::subset(std::span<const uint32_t> rows) const {
  Dataset out(name_);
  out.labels_ = labels_;
  out.points_.reserve(rows.size());
  for (uint32_t r : rows) {
    if (r >= points_.size())
      throw ConfigError("subset row " + std::to_string(r) + " out of range");
    out.points_.push_back(points_[r]);
  }
  return out;
}

}  // namespace acker

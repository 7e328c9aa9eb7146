#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acker/error.hpp"

namespace acker {

// A 2-D geographic coordinate in degrees.
// Valid points satisfy lon in [-180, 180] and lat in [-90, 90], both finite.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

inline constexpr double kLonMin = -180.0;
inline constexpr double kLonMax = 180.0;
inline constexpr double kLatMin = -90.0;
inline constexpr double kLatMax = 90.0;

bool point_in_bounds(const GeoPoint& p);

// Plain Euclidean distance on raw degree coordinates. There is
// deliberately no wrap-around at the +-180 meridian; see README.
double distance(const GeoPoint& a, const GeoPoint& b);

// Squared distance, the canonical neighbor-ordering key. Ties between
// equal keys are broken by ascending point index everywhere.
double distance_squared(const GeoPoint& a, const GeoPoint& b);

using ClassId = uint32_t;

struct LabeledPoint {
  GeoPoint point;
  ClassId label = 0;
};

// Dense id <-> name bijection; ids are assigned in first-appearance order.
class LabelDictionary {
 public:
  ClassId intern(std::string_view name);
  std::optional<ClassId> find(std::string_view name) const;
  const std::string& name(ClassId id) const;
  size_t size() const { return names_.size(); }
  bool operator==(const LabelDictionary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ClassId> ids_;
};

// Ordered collection of labeled points. A point's position in the
// sequence is its durable identity; all deterministic tie-breaks in the
// toolkit refer to it.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::string name) : name_(std::move(name)) {}

  // Validates coordinates; the label is interned on first appearance.
  void add(const GeoPoint& p, std::string_view label_name);
  // Label id must already exist in the dictionary.
  void add(const GeoPoint& p, ClassId label);

  size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const LabeledPoint& operator[](size_t i) const { return points_[i]; }
  const std::vector<LabeledPoint>& points() const { return points_; }
  const LabelDictionary& labels() const { return labels_; }
  const std::string& name() const { return name_; }

  // New dataset holding the given rows in the given order, sharing this
  // dataset's label dictionary. Row order defines the new identities.
  Dataset subset(std::span<const uint32_t> rows) const;

 private:
  std::vector<LabeledPoint> points_;
  LabelDictionary labels_;
  std::string name_;
};

}  // namespace acker

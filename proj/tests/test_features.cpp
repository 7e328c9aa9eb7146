#include <doctest.h>

#include "acker/error.hpp"
#include "acker/features.hpp"
#include "acker/rng.hpp"
#include "oracles.hpp"

using namespace acker;

TEST_CASE("feature names round-trip") {
  for (FeatureKind kind : {FeatureKind::AvgDist, FeatureKind::MaxDist,
                           FeatureKind::MaxAvgComb, FeatureKind::LatLon}) {
    CHECK(feature_from_name(feature_name(kind)) == kind);
  }
  CHECK(feature_name(FeatureKind::MaxAvgComb) == "max_avg_comb");
  CHECK_FALSE(feature_from_name("nope").has_value());
  CHECK_FALSE(feature_from_name("").has_value());
}

TEST_CASE("dimensionality and k-dependence") {
  CHECK(feature_dimensionality(FeatureKind::AvgDist) == 1);
  CHECK(feature_dimensionality(FeatureKind::MaxDist) == 1);
  CHECK(feature_dimensionality(FeatureKind::MaxAvgComb) == 2);
  CHECK(feature_dimensionality(FeatureKind::LatLon) == 2);
  CHECK(feature_k_dependent(FeatureKind::AvgDist));
  CHECK(feature_k_dependent(FeatureKind::MaxDist));
  CHECK(feature_k_dependent(FeatureKind::MaxAvgComb));
  CHECK_FALSE(feature_k_dependent(FeatureKind::LatLon));
}

TEST_CASE("features of a hand-built neighbor list") {
  const GeoPoint p{10.0, 20.0};
  const NeighborList neighbors{{4, 1.0}, {2, 2.0}, {9, 4.0}};

  const FeatureValue avg = feature_from_neighbors(FeatureKind::AvgDist, p, neighbors, 3);
  CHECK(avg.dim == 1);
  CHECK(avg.components[0] == (1.0 + 2.0 + 4.0) / 3.0);

  const FeatureValue max = feature_from_neighbors(FeatureKind::MaxDist, p, neighbors, 3);
  CHECK(max.components[0] == 4.0);

  const FeatureValue comb = feature_from_neighbors(FeatureKind::MaxAvgComb, p, neighbors, 3);
  CHECK(comb.dim == 2);
  CHECK(comb.components[0] == 4.0);
  CHECK(comb.components[1] == (1.0 + 2.0 + 4.0) / 3.0);

  // Prefix k=2 ignores the third neighbor.
  const FeatureValue avg2 = feature_from_neighbors(FeatureKind::AvgDist, p, neighbors, 2);
  CHECK(avg2.components[0] == 1.5);

  const FeatureValue ll = feature_from_neighbors(FeatureKind::LatLon, p, {}, 0);
  CHECK(ll.dim == 2);
  CHECK(ll.components[0] == 20.0);  // lat first
  CHECK(ll.components[1] == 10.0);

  CHECK_THROWS_AS(feature_from_neighbors(FeatureKind::AvgDist, p, neighbors, 0),
                  ConfigError);
  CHECK_THROWS_AS(feature_from_neighbors(FeatureKind::AvgDist, p, neighbors, 4),
                  ConfigError);
}

TEST_CASE("feature_value equals the scan oracle, leave-one-out included") {
  Dataset ds("rand");
  Rng rng(23);
  for (int i = 0; i < 150; ++i)
    ds.add({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)}, i % 2 ? "a" : "b");
  const TrainingSet train{ds};
  for (FeatureKind kind : {FeatureKind::AvgDist, FeatureKind::MaxDist,
                           FeatureKind::MaxAvgComb, FeatureKind::LatLon}) {
    for (int q = 0; q < 15; ++q) {
      const GeoPoint query{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
      for (size_t k : {size_t{1}, size_t{5}, size_t{20}}) {
        const FeatureValue got = feature_value(kind, train, query, k);
        const FeatureValue want = oracle::feature_scan(kind, ds, query, k, std::nullopt);
        CHECK(got.dim == want.dim);
        CHECK(got.components == want.components);
      }
      const uint32_t excl = static_cast<uint32_t>(rng.below(ds.size()));
      const FeatureValue got = feature_value(kind, train, ds[excl].point, 5, excl);
      const FeatureValue want = oracle::feature_scan(kind, ds, ds[excl].point, 5, excl);
      CHECK(got.components == want.components);
    }
  }
}

TEST_CASE("lat_lon ignores k entirely") {
  Dataset ds("rand");
  Rng rng(3);
  for (int i = 0; i < 30; ++i)
    ds.add({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, "a");
  const TrainingSet train{ds};
  const GeoPoint q{0.25, -0.75};
  const FeatureValue a = feature_value(FeatureKind::LatLon, train, q, 1);
  const FeatureValue b = feature_value(FeatureKind::LatLon, train, q, 30);
  CHECK(a.components == b.components);
  CHECK(a.components[0] == -0.75);
  CHECK(a.components[1] == 0.25);
}

TEST_CASE("similarity key and similarity") {
  FeatureValue a{{3.0, 0.0}, 1};
  FeatureValue b{{5.0, 0.0}, 1};
  CHECK(similarity_key(a, b) == 4.0);
  CHECK(similarity(a, b) == -2.0);
  CHECK(similarity_key(a, a) == 0.0);
  CHECK(similarity(a, a) == 0.0);

  FeatureValue c{{0.0, 0.0}, 2};
  FeatureValue d{{3.0, 4.0}, 2};
  CHECK(similarity_key(c, d) == 25.0);
  CHECK(similarity(c, d) == -5.0);

  CHECK_THROWS_AS(similarity_key(a, c), ConfigError);
}
